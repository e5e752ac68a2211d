//! wanplan: plan a regional backbone from city data.
//!
//! Every subcommand runs some prefix of the pipeline (demographics ->
//! demand -> routes -> loads -> sizing -> cost) on a dataset directory, or
//! on the bundled reference network when no directory is given. Output is
//! deterministic: the same input and flags produce byte-identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wanplan_core::{
    adsl_annual_cost, atm_annual_cost, rented_line_annual_cost, AccessTariff, AtmTariff,
    DemandMode, DuplexMode, LoadScope, Money, OverlengthPolicy,
};

use wanplan_cli::pipeline::{self, Failure};
use wanplan_cli::render::{self, Format};

#[derive(Parser)]
#[command(
    name = "wanplan",
    version,
    about = "Backbone network planning: demographics, demand, routes, link sizing and leased-line cost"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a dataset directory and list its warnings
    Validate(DataArg),
    /// Per-city households, socioeconomic indicator and traffic
    Sei {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// City-pair demand matrix in Erlangs
    Traffic {
        #[command(flatten)]
        data: DataArg,
        /// Keep per-direction demand or average opposite directions
        #[arg(long, value_enum, default_value_t)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Shortest routes from one city
    Route {
        #[command(flatten)]
        data: DataArg,
        /// Source city: id, name, unique prefix or short code
        #[arg(long)]
        from: String,
        /// Destination city; all destinations when omitted
        #[arg(long)]
        to: Option<String>,
        #[arg(long, value_enum, default_value_t)]
        algo: Algo,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Per-link load in Erlangs, heaviest first
    Loads {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        scope: Scope,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Link bandwidth and the capacity tier it needs
    Size {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        scope: Scope,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Leased-line cost of the sized network
    Cost {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        scope: Scope,
        #[arg(long, value_enum, default_value_t)]
        currency: CurrencyOpt,
        /// Pricing of links longer than the tariff grid covers
        #[arg(long, value_enum, default_value_t)]
        overlength: Policy,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run the whole pipeline and emit one JSON report
    Plan {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        scope: Scope,
        #[arg(long, value_enum, default_value_t)]
        overlength: Policy,
        /// Write the report here instead of standard output
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// First-year cost of a single connection
    Calc {
        #[command(subcommand)]
        tech: CalcTech,
    },
    /// Topology with traffic annotations in DOT format
    ExportDot {
        #[command(flatten)]
        data: DataArg,
        #[arg(long, value_enum, default_value_t)]
        scope: Scope,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
}

#[derive(Args)]
struct DataArg {
    /// Dataset directory with cities.csv, edges.csv, params.csv and
    /// optionally tariffs.csv; the bundled network when omitted
    #[arg(value_name = "DATA_DIR")]
    data: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CalcTech {
    /// Subscriber-line pair: access and network service charges
    Adsl {
        #[arg(long, value_enum)]
        mode: Duplex,
        /// One-time access charge
        #[arg(long)]
        acc: Money,
        /// Monthly access subscription
        #[arg(long)]
        suba: Money,
        /// One-time service initiation charge
        #[arg(long = "int")]
        init: Money,
        /// Monthly service subscription
        #[arg(long)]
        subn: Money,
    },
    /// Point-to-point rented line
    Rented {
        #[arg(long, value_enum)]
        mode: Duplex,
        /// One-time initiation charge
        #[arg(long = "int")]
        init: Money,
        /// Monthly subscription
        #[arg(long)]
        sub: Money,
    },
    /// Virtual circuit with a network access on each side
    Atm {
        #[arg(long, value_enum)]
        mode: Duplex,
        #[arg(long)]
        ins_a: Money,
        #[arg(long)]
        sub_a: Money,
        #[arg(long)]
        ins_b: Money,
        #[arg(long)]
        sub_b: Money,
        #[arg(long)]
        ins_pvc: Money,
        #[arg(long)]
        sub_pvc: Money,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Mode {
    Directed,
    #[default]
    Symmetrized,
}

impl From<Mode> for DemandMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Directed => DemandMode::Directed,
            Mode::Symmetrized => DemandMode::Symmetrized,
        }
    }
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Algo {
    #[default]
    Dijkstra,
    Fw,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Scope {
    #[default]
    All,
    #[value(name = "endpoint_only")]
    EndpointOnly,
}

impl From<Scope> for LoadScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::All => LoadScope::All,
            Scope::EndpointOnly => LoadScope::EndpointOnly,
        }
    }
}

#[derive(Clone, Copy, Default, PartialEq, ValueEnum)]
enum CurrencyOpt {
    #[default]
    Mkd,
    Eur,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Policy {
    #[default]
    Clamp,
    Error,
}

impl From<Policy> for OverlengthPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Clamp => OverlengthPolicy::Clamp,
            Policy::Error => OverlengthPolicy::Error,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Duplex {
    Full,
    Half,
    Simplex,
}

impl From<Duplex> for DuplexMode {
    fn from(d: Duplex) -> Self {
        match d {
            Duplex::Full => DuplexMode::Full,
            Duplex::Half => DuplexMode::Half,
            Duplex::Simplex => DuplexMode::Simplex,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Validate(data) => {
            let loaded = pipeline::load(data.data.as_deref())?;
            print!("{}", render::validate_report(&loaded));
            Ok(())
        }
        Command::Sei { data, format } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let traffic = pipeline::traffic_of(&loaded.dataset)?;
            print!("{}", render::sei_report(&traffic, format));
            Ok(())
        }
        Command::Traffic { data, mode, format } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let traffic = pipeline::traffic_of(&loaded.dataset)?;
            let demand = pipeline::demand_of(&traffic, mode.into())?;
            print!("{}", render::traffic_report(&loaded.dataset, &demand, format));
            Ok(())
        }
        Command::Route {
            data,
            from,
            to,
            algo,
            format,
        } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let ds = &loaded.dataset;
            let source = pipeline::resolve_city(ds, &from)?;
            let target = to.as_deref().map(|t| pipeline::resolve_city(ds, t)).transpose()?;
            let routes = pipeline::routes_from(ds, source, target, matches!(algo, Algo::Fw))?;
            print!("{}", render::route_report(ds, &routes, format));
            Ok(())
        }
        Command::Loads { data, scope, format } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let loads = pipeline::loads_of(&loaded.dataset, scope.into())?;
            print!("{}", render::loads_report(&loaded.dataset, &loads, format));
            Ok(())
        }
        Command::Size { data, scope, format } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let ds = &loaded.dataset;
            let loads = pipeline::loads_of(ds, scope.into())?;
            let sizings = pipeline::sizings_of(ds, &loads);
            print!("{}", render::size_report(ds, &sizings, format));
            Ok(())
        }
        Command::Cost {
            data,
            scope,
            currency,
            overlength,
            format,
        } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let ds = &loaded.dataset;
            let loads = pipeline::loads_of(ds, scope.into())?;
            let sizings = pipeline::sizings_of(ds, &loads);
            let quote = pipeline::quote_of(ds, &sizings, overlength.into())?;
            print!(
                "{}",
                render::cost_report(&quote, currency == CurrencyOpt::Eur, format)
            );
            Ok(())
        }
        Command::Plan {
            data,
            scope,
            overlength,
            output,
        } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let report = pipeline::full_plan(&loaded, scope.into(), overlength.into())?;
            let text = render::plan_json(&report);
            match output {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display()))),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
        Command::Calc { tech } => {
            print!("{}", render_calc(tech));
            Ok(())
        }
        Command::ExportDot { data, scope, output } => {
            let loaded = pipeline::load_noted(data.data.as_deref())?;
            let ds = &loaded.dataset;
            let traffic = pipeline::traffic_of(ds)?;
            let loads = pipeline::loads_of(ds, scope.into())?;
            let sizings = pipeline::sizings_of(ds, &loads);
            let text = render::export_dot(ds, &traffic, &sizings);
            std::fs::write(&output, text)
                .map_err(|e| Failure::io(format!("cannot write {}: {e}", output.display())))
        }
    }
}

fn render_calc(tech: CalcTech) -> String {
    match tech {
        CalcTech::Adsl {
            mode,
            acc,
            suba,
            init,
            subn,
        } => {
            let total = adsl_annual_cost(mode.into(), &AccessTariff { acc, suba, init, subn });
            format!("{}\n", render::trim_money(total))
        }
        CalcTech::Rented { mode, init, sub } => {
            let total = rented_line_annual_cost(mode.into(), init, sub);
            format!("{}\n", render::trim_money(total))
        }
        CalcTech::Atm {
            mode,
            ins_a,
            sub_a,
            ins_b,
            sub_b,
            ins_pvc,
            sub_pvc,
        } => {
            let cost = atm_annual_cost(
                mode.into(),
                &AtmTariff {
                    ins_a,
                    sub_a,
                    ins_b,
                    sub_b,
                    ins_pvc,
                    sub_pvc,
                },
            );
            let access_b = match cost.na_b {
                Some(v) => render::trim_money(v),
                None => "-".to_string(),
            };
            format!(
                "access A {}\naccess B {}\ncircuit {}\ntotal {}\n",
                render::trim_money(cost.na_a),
                access_b,
                render::trim_money(cost.pvcc),
                render::trim_money(cost.total)
            )
        }
    }
}
