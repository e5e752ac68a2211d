//! Report rendering. Tables are aligned text, CSV is plain comma-joined
//! rows (values never contain commas), JSON goes through serde. All
//! orderings are fixed up front so output is byte-stable.
//!
//! Presentation rounding: Erlangs and Mbps to two decimals, bps as exact
//! integers, money as whole denars (euros to two decimals).

use clap::ValueEnum;
use serde::Serialize;
use wanplan_core::{
    short_code, CityId, CityTraffic, CostQuote, Dataset, DemandMatrix, LinkLoad, LinkSizing,
    LoadScope, LoadedDataset, Money, OverlengthPolicy,
};

use crate::pipeline::Route;

#[derive(Clone, Copy, Default, PartialEq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Csv,
    Json,
}

pub fn trim_money(m: Money) -> String {
    if m.hundredths() % 100 == 0 {
        (m.hundredths() / 100).to_string()
    } else {
        m.to_string()
    }
}

fn f2(x: f64) -> String {
    format!("{x:.2}")
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn km_str(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{}", x as i64)
    } else {
        f2(x)
    }
}

fn money_str(m: Money, eur: bool) -> String {
    if eur {
        f2(m.eur())
    } else {
        m.mkd_rounded().to_string()
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("report serializes");
    out.push('\n');
    out
}

/// Space-aligned columns; the last column is not padded.
fn table(header: Option<&[&str]>, rows: &[Vec<String>]) -> String {
    let columns = header
        .map(|h| h.len())
        .or_else(|| rows.iter().map(|r| r.len()).max())
        .unwrap_or(0);
    let mut widths = vec![0usize; columns];
    if let Some(h) = header {
        for (i, cell) in h.iter().enumerate() {
            widths[i] = cell.len();
        }
    }
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &mut dyn Iterator<Item = &str>| {
        let cells: Vec<&str> = cells.collect();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                out.push_str(cell);
            } else {
                out.push_str(&format!("{cell:<width$}  ", width = widths[i]));
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    };
    if let Some(h) = header {
        push_row(&mut h.iter().copied());
    }
    for row in rows {
        push_row(&mut row.iter().map(String::as_str));
    }
    out
}

fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn link_label(ds: &Dataset, a: CityId, b: CityId) -> String {
    format!(
        "{}-{}",
        crate::pipeline::name_of(ds, a),
        crate::pipeline::name_of(ds, b)
    )
}

fn code_of(name: &str) -> String {
    short_code(name)
        .map(str::to_string)
        .unwrap_or_else(|| name.to_string())
}

pub fn validate_report(loaded: &LoadedDataset) -> String {
    let ds = &loaded.dataset;
    let mut out = format!(
        "cities: {}\nlinks: {}\ntotal population: {}\n",
        ds.cities.len(),
        ds.topology.edges().len(),
        ds.total_population()
    );
    for w in &loaded.warnings {
        out.push_str(&format!("warning: {w}\n"));
    }
    match loaded.warnings.len() {
        0 => out.push_str("ok\n"),
        1 => out.push_str("ok (1 warning)\n"),
        n => out.push_str(&format!("ok ({n} warnings)\n")),
    }
    out
}

#[derive(Serialize)]
pub struct TrafficRow {
    pub id: u32,
    pub name: String,
    pub population: u64,
    pub households: f64,
    pub commercial_erlangs: f64,
    pub residential_erlangs: f64,
    pub offered_erlangs: f64,
    pub sei: f64,
    pub carried_erlangs: f64,
}

impl TrafficRow {
    fn new(t: &CityTraffic) -> Self {
        TrafficRow {
            id: t.city.id.0,
            name: t.city.name.clone(),
            population: t.city.population,
            households: t.households,
            commercial_erlangs: t.commercial_erlangs,
            residential_erlangs: t.residential_erlangs,
            offered_erlangs: t.offered_erlangs,
            sei: t.sei,
            carried_erlangs: t.carried_erlangs,
        }
    }

    fn cells(&self) -> Vec<String> {
        vec![
            self.id.to_string(),
            self.name.clone(),
            self.population.to_string(),
            f2(self.households),
            f2(self.commercial_erlangs),
            f2(self.residential_erlangs),
            f2(self.offered_erlangs),
            f6(self.sei),
            f2(self.carried_erlangs),
        ]
    }
}

const TRAFFIC_HEADER: [&str; 9] = [
    "id",
    "name",
    "population",
    "households",
    "commercial_erlangs",
    "residential_erlangs",
    "offered_erlangs",
    "sei",
    "carried_erlangs",
];

pub fn sei_report(traffic: &[CityTraffic], format: Format) -> String {
    let rows: Vec<TrafficRow> = traffic.iter().map(TrafficRow::new).collect();
    let cells: Vec<Vec<String>> = rows.iter().map(TrafficRow::cells).collect();
    match format {
        Format::Table => table(Some(&TRAFFIC_HEADER), &cells),
        Format::Csv => csv(&TRAFFIC_HEADER, &cells),
        Format::Json => json(&rows),
    }
}

#[derive(Serialize)]
pub struct DemandReport {
    pub mode: String,
    pub cities: Vec<u32>,
    pub erlangs: Vec<Vec<f64>>,
}

impl DemandReport {
    fn new(demand: &DemandMatrix) -> Self {
        DemandReport {
            mode: demand.mode().to_string(),
            cities: demand.order().iter().map(|id| id.0).collect(),
            erlangs: demand.entries().to_vec(),
        }
    }
}

pub fn traffic_report(ds: &Dataset, demand: &DemandMatrix, format: Format) -> String {
    let codes: Vec<String> = demand
        .order()
        .iter()
        .map(|id| code_of(&crate::pipeline::name_of(ds, *id)))
        .collect();
    let cells: Vec<Vec<String>> = demand
        .entries()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut out = vec![codes[i].clone()];
            out.extend(row.iter().enumerate().map(|(j, v)| {
                if i == j {
                    match format {
                        Format::Csv => String::new(),
                        _ => "-".to_string(),
                    }
                } else {
                    f2(*v)
                }
            }));
            out
        })
        .collect();
    let mut header: Vec<&str> = vec!["from"];
    header.extend(codes.iter().map(String::as_str));
    match format {
        Format::Table => table(Some(&header), &cells),
        Format::Csv => csv(&header, &cells),
        Format::Json => json(&DemandReport::new(demand)),
    }
}

#[derive(Serialize)]
pub struct RouteRow {
    pub from: u32,
    pub to: u32,
    pub distance_km: f64,
    pub path: Vec<u32>,
    pub route: String,
}

impl RouteRow {
    fn new(ds: &Dataset, r: &Route) -> Self {
        RouteRow {
            from: r.from.0,
            to: r.to.0,
            distance_km: r.distance_km,
            path: r.path.iter().map(|id| id.0).collect(),
            route: r
                .path
                .iter()
                .map(|id| crate::pipeline::name_of(ds, *id))
                .collect::<Vec<_>>()
                .join("-"),
        }
    }
}

pub fn route_report(ds: &Dataset, routes: &[Route], format: Format) -> String {
    let rows: Vec<RouteRow> = routes.iter().map(|r| RouteRow::new(ds, r)).collect();
    match format {
        Format::Table => {
            let mut out = String::new();
            for r in &rows {
                out.push_str(&format!("{} {}\n", r.route, km_str(r.distance_km)));
            }
            out
        }
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.from.to_string(),
                        r.to.to_string(),
                        km_str(r.distance_km),
                        r.route.clone(),
                    ]
                })
                .collect();
            csv(&["from", "to", "distance_km", "route"], &cells)
        }
        Format::Json => json(&rows),
    }
}

#[derive(Serialize)]
pub struct LoadRow {
    pub a: u32,
    pub b: u32,
    pub link: String,
    pub length_km: f64,
    pub erlangs: f64,
    pub contributors: usize,
}

impl LoadRow {
    fn new(ds: &Dataset, l: &LinkLoad) -> Self {
        LoadRow {
            a: l.edge.a.0,
            b: l.edge.b.0,
            link: link_label(ds, l.edge.a, l.edge.b),
            length_km: l.edge.length_km,
            erlangs: l.erlangs,
            contributors: l.contributors,
        }
    }
}

pub fn loads_report(ds: &Dataset, loads: &[LinkLoad], format: Format) -> String {
    let rows: Vec<LoadRow> = loads.iter().map(|l| LoadRow::new(ds, l)).collect();
    match format {
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.link.clone(), km_str(r.length_km), f2(r.erlangs)])
                .collect();
            table(Some(&["link", "length_km", "erlangs"]), &cells)
        }
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.a.to_string(),
                        r.b.to_string(),
                        r.link.clone(),
                        km_str(r.length_km),
                        f2(r.erlangs),
                        r.contributors.to_string(),
                    ]
                })
                .collect();
            csv(
                &["a", "b", "link", "length_km", "erlangs", "contributors"],
                &cells,
            )
        }
        Format::Json => json(&rows),
    }
}

#[derive(Serialize)]
pub struct SizingRow {
    pub a: u32,
    pub b: u32,
    pub link: String,
    pub length_km: f64,
    pub erlangs: f64,
    pub bandwidth_bps: u64,
    pub tier: String,
    pub tier_bps: u64,
    pub line_count: u32,
}

impl SizingRow {
    fn new(ds: &Dataset, s: &LinkSizing) -> Self {
        SizingRow {
            a: s.edge.a.0,
            b: s.edge.b.0,
            link: link_label(ds, s.edge.a, s.edge.b),
            length_km: s.edge.length_km,
            erlangs: s.erlangs,
            bandwidth_bps: s.bandwidth_bps.round() as u64,
            tier: s.tier.to_string(),
            tier_bps: s.tier.bps(),
            line_count: s.line_count,
        }
    }

    fn mbps(&self) -> f64 {
        self.bandwidth_bps as f64 / 1e6
    }
}

pub fn size_report(ds: &Dataset, sizings: &[LinkSizing], format: Format) -> String {
    let rows: Vec<SizingRow> = sizings.iter().map(|s| SizingRow::new(ds, s)).collect();
    match format {
        Format::Table => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.link.clone(),
                        f2(r.erlangs),
                        r.bandwidth_bps.to_string(),
                        f2(r.mbps()),
                        r.tier.clone(),
                        r.line_count.to_string(),
                    ]
                })
                .collect();
            table(
                Some(&["link", "erlangs", "bps", "mbps", "tier", "lines"]),
                &cells,
            )
        }
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.a.to_string(),
                        r.b.to_string(),
                        r.link.clone(),
                        km_str(r.length_km),
                        f2(r.erlangs),
                        r.bandwidth_bps.to_string(),
                        f2(r.mbps()),
                        r.tier.clone(),
                        r.line_count.to_string(),
                    ]
                })
                .collect();
            csv(
                &[
                    "a",
                    "b",
                    "link",
                    "length_km",
                    "erlangs",
                    "bps",
                    "mbps",
                    "tier",
                    "line_count",
                ],
                &cells,
            )
        }
        Format::Json => json(&rows),
    }
}

#[derive(Serialize)]
pub struct CostItemRow {
    pub a: u32,
    pub b: u32,
    pub link: String,
    pub tier: String,
    pub line_count: u32,
    pub monthly_mkd: String,
    pub annual_mkd: String,
}

#[derive(Serialize)]
pub struct CostReport {
    pub items: Vec<CostItemRow>,
    pub monthly_total_mkd: String,
    pub annual_total_mkd: String,
    pub monthly_total_eur: f64,
    pub annual_total_eur: f64,
    pub warnings: Vec<String>,
}

impl CostReport {
    fn new(quote: &CostQuote) -> Self {
        CostReport {
            items: quote
                .items
                .iter()
                .map(|i| CostItemRow {
                    a: i.a.0,
                    b: i.b.0,
                    link: i.label.clone(),
                    tier: i.tier.to_string(),
                    line_count: i.line_count,
                    monthly_mkd: i.monthly.to_string(),
                    annual_mkd: i.annual.to_string(),
                })
                .collect(),
            monthly_total_mkd: quote.monthly_total.to_string(),
            annual_total_mkd: quote.annual_total.to_string(),
            monthly_total_eur: (quote.monthly_total.eur() * 100.0).round() / 100.0,
            annual_total_eur: (quote.annual_total.eur() * 100.0).round() / 100.0,
            warnings: quote.warnings.clone(),
        }
    }
}

pub fn cost_report(quote: &CostQuote, eur: bool, format: Format) -> String {
    let unit = if eur { "eur" } else { "mkd" };
    match format {
        Format::Table => {
            let mut cells: Vec<Vec<String>> = quote
                .items
                .iter()
                .map(|i| {
                    vec![
                        i.label.clone(),
                        i.tier.to_string(),
                        i.line_count.to_string(),
                        money_str(i.monthly, eur),
                        money_str(i.annual, eur),
                    ]
                })
                .collect();
            cells.push(vec![
                "total".to_string(),
                String::new(),
                String::new(),
                money_str(quote.monthly_total, eur),
                money_str(quote.annual_total, eur),
            ]);
            let monthly = format!("monthly_{unit}");
            let annual = format!("annual_{unit}");
            let header = ["link", "tier", "lines", monthly.as_str(), annual.as_str()];
            let mut out = table(Some(&header), &cells);
            for w in &quote.warnings {
                out.push_str(&format!("warning: {w}\n"));
            }
            out
        }
        Format::Csv => {
            let mut cells: Vec<Vec<String>> = quote
                .items
                .iter()
                .map(|i| {
                    vec![
                        i.a.to_string(),
                        i.b.to_string(),
                        i.label.clone(),
                        i.tier.to_string(),
                        i.line_count.to_string(),
                        money_str(i.monthly, eur),
                        money_str(i.annual, eur),
                    ]
                })
                .collect();
            cells.push(vec![
                String::new(),
                String::new(),
                "total".to_string(),
                String::new(),
                String::new(),
                money_str(quote.monthly_total, eur),
                money_str(quote.annual_total, eur),
            ]);
            let monthly = format!("monthly_{unit}");
            let annual = format!("annual_{unit}");
            let header = [
                "a",
                "b",
                "link",
                "tier",
                "line_count",
                monthly.as_str(),
                annual.as_str(),
            ];
            csv(&header, &cells)
        }
        Format::Json => json(&CostReport::new(quote)),
    }
}

#[derive(Serialize)]
pub struct CitySummary {
    pub id: u32,
    pub name: String,
    pub population: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sei: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub activity: Option<[f64; 6]>,
}

#[derive(Serialize)]
pub struct LinkSummary {
    pub a: u32,
    pub b: u32,
    pub length_km: f64,
}

#[derive(Serialize)]
pub struct DatasetSummary {
    pub total_population: u64,
    pub cities: Vec<CitySummary>,
    pub links: Vec<LinkSummary>,
}

#[derive(Serialize)]
pub struct WeightsSummary {
    pub public_sector: f64,
    pub enterprise: f64,
    pub pupils: f64,
    pub students: f64,
    pub unemployed: f64,
    pub other: f64,
}

#[derive(Serialize)]
pub struct ParamsSummary {
    pub persons_per_household: f64,
    pub commercial_share: f64,
    pub residential_share: f64,
    pub commercial_sessions_per_day: f64,
    pub commercial_session_hours: f64,
    pub residential_sessions_per_day: f64,
    pub residential_session_hours: f64,
    pub channel_kbps: f64,
    pub weights: WeightsSummary,
}

#[derive(Serialize)]
pub struct ConfigSummary {
    pub demand_mode: String,
    pub scope: String,
    pub overlength: String,
}

#[derive(Serialize)]
pub struct PlanReport {
    pub dataset: DatasetSummary,
    pub params: ParamsSummary,
    pub config: ConfigSummary,
    pub warnings: Vec<String>,
    pub traffic: Vec<TrafficRow>,
    pub demand: DemandReport,
    pub routes: Vec<RouteRow>,
    pub loads: Vec<LoadRow>,
    pub sizings: Vec<SizingRow>,
    pub cost: CostReport,
}

impl PlanReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        loaded: &LoadedDataset,
        scope: LoadScope,
        policy: OverlengthPolicy,
        traffic: &[CityTraffic],
        demand: &DemandMatrix,
        routes: &[Route],
        loads: &[LinkLoad],
        sizings: &[LinkSizing],
        quote: &CostQuote,
    ) -> Self {
        let ds = &loaded.dataset;
        PlanReport {
            dataset: DatasetSummary {
                total_population: ds.total_population(),
                cities: ds
                    .cities
                    .iter()
                    .map(|c| CitySummary {
                        id: c.id.0,
                        name: c.name.clone(),
                        population: c.population,
                        sei: c.sei_override,
                        activity: c.activity.map(|a| {
                            [
                                a.public_sector,
                                a.enterprise,
                                a.pupils,
                                a.students,
                                a.unemployed,
                                a.other,
                            ]
                        }),
                    })
                    .collect(),
                links: ds
                    .topology
                    .edges()
                    .iter()
                    .map(|e| LinkSummary {
                        a: e.a.0,
                        b: e.b.0,
                        length_km: e.length_km,
                    })
                    .collect(),
            },
            params: ParamsSummary {
                persons_per_household: ds.params.persons_per_household,
                commercial_share: ds.params.commercial_share,
                residential_share: ds.params.residential_share,
                commercial_sessions_per_day: ds.params.commercial_sessions_per_day,
                commercial_session_hours: ds.params.commercial_session_hours,
                residential_sessions_per_day: ds.params.residential_sessions_per_day,
                residential_session_hours: ds.params.residential_session_hours,
                channel_kbps: ds.params.channel_kbps,
                weights: WeightsSummary {
                    public_sector: ds.weights.public_sector,
                    enterprise: ds.weights.enterprise,
                    pupils: ds.weights.pupils,
                    students: ds.weights.students,
                    unemployed: ds.weights.unemployed,
                    other: ds.weights.other,
                },
            },
            config: ConfigSummary {
                demand_mode: demand.mode().to_string(),
                scope: scope.to_string(),
                overlength: match policy {
                    OverlengthPolicy::Clamp => "clamp".to_string(),
                    OverlengthPolicy::Error => "error".to_string(),
                },
            },
            warnings: loaded.warnings.iter().map(|w| w.to_string()).collect(),
            traffic: traffic.iter().map(TrafficRow::new).collect(),
            demand: DemandReport::new(demand),
            routes: routes.iter().map(|r| RouteRow::new(ds, r)).collect(),
            loads: loads.iter().map(|l| LoadRow::new(ds, l)).collect(),
            sizings: sizings.iter().map(|s| SizingRow::new(ds, s)).collect(),
            cost: CostReport::new(quote),
        }
    }
}

pub fn plan_json(report: &PlanReport) -> String {
    json(report)
}

/// Undirected DOT graph: one node per city (name plus carried Erlangs),
/// one edge per link labeled "km / Erlangs / Mbps / tier". Without sizing
/// rows the labels shrink to names and lengths.
pub fn export_dot(ds: &Dataset, traffic: &[CityTraffic], sizings: &[LinkSizing]) -> String {
    let carried = |id: CityId| {
        traffic
            .iter()
            .find(|t| t.city.id == id)
            .map(|t| t.carried_erlangs)
    };
    let sizing_for = |a: CityId, b: CityId| {
        let key = (a.min(b), a.max(b));
        sizings
            .iter()
            .find(|s| (s.edge.a.min(s.edge.b), s.edge.a.max(s.edge.b)) == key)
    };
    let mut out = String::from("graph backbone {\n  node [shape=box];\n");
    for c in &ds.cities {
        let label = match (sizings.is_empty(), carried(c.id)) {
            (false, Some(e)) => format!("{}\\n{} E", c.name, f2(e)),
            _ => c.name.clone(),
        };
        out.push_str(&format!("  {} [label=\"{}\"];\n", c.id.0, label));
    }
    for e in ds.topology.edges() {
        let label = match sizing_for(e.a, e.b) {
            Some(s) => format!(
                "{} km / {} E / {} Mbps / {}",
                km_str(e.length_km),
                f2(s.erlangs),
                f2(s.bandwidth_bps / 1e6),
                s.tier
            ),
            None => format!("{} km", km_str(e.length_km)),
        };
        out.push_str(&format!(
            "  {} -- {} [label=\"{}\"];\n",
            e.a.0, e.b.0, label
        ));
    }
    out.push_str("}\n");
    out
}
