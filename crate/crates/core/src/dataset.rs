//! Input files and the bundled case study.
//!
//! A dataset directory holds four CSV files: `cities.csv` (population and
//! socioeconomic profile per city), `edges.csv` (internode links with
//! lengths in km), `params.csv` (usage assumptions as key/value rows) and
//! `tariffs.csv` (the leased-line price grid; optional, the built-in grid
//! applies when absent). Parsing reports the file and line of every
//! malformed row; soft issues such as over-length links become warnings.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::costing::{Money, PriceSchedule};
use crate::demographics::{ActivityCounts, City, TrafficParams, UsageWeights};
use crate::loading::Capacity;
use crate::routing::{Edge, Topology};
use crate::CityId;

/// A fully validated planning input: cities, usage parameters, topology
/// and tariff schedule. Immutable once constructed.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    /// Cities sorted by id.
    pub cities: Vec<City>,
    pub params: TrafficParams,
    pub weights: UsageWeights,
    pub topology: Topology,
    pub schedule: PriceSchedule,
}

impl Dataset {
    /// Assembles and cross-validates the parts. Edge endpoints must be
    /// declared cities and the total population must be positive.
    pub fn new(
        mut cities: Vec<City>,
        params: TrafficParams,
        weights: UsageWeights,
        topology: Topology,
        schedule: PriceSchedule,
    ) -> Result<Self, DatasetError> {
        let invalid = |file: &str, message: String| DatasetError::Invalid {
            file: file.to_string(),
            message,
        };
        if cities.is_empty() {
            return Err(invalid(CITIES_FILE, "no cities".to_string()));
        }
        params
            .validate()
            .map_err(|e| invalid(PARAMS_FILE, e.to_string()))?;
        weights
            .validate()
            .map_err(|e| invalid(PARAMS_FILE, e.to_string()))?;
        cities.sort_by_key(|c| c.id);
        let mut seen = HashSet::new();
        for c in &cities {
            if !seen.insert(c.id) {
                return Err(invalid(CITIES_FILE, format!("duplicate city id {}", c.id)));
            }
            if c.sei_override.is_none() && c.activity.is_none() {
                return Err(invalid(
                    CITIES_FILE,
                    format!("city {} has neither an sei value nor activity counts", c.id),
                ));
            }
        }
        if cities.iter().map(|c| c.population).sum::<u64>() == 0 {
            return Err(invalid(CITIES_FILE, "total population is zero".to_string()));
        }
        for n in topology.nodes() {
            if !seen.contains(n) {
                return Err(invalid(
                    EDGES_FILE,
                    format!("unknown city id {n} in the topology"),
                ));
            }
        }
        if topology.nodes().len() != cities.len() {
            return Err(invalid(
                EDGES_FILE,
                "topology does not cover every city".to_string(),
            ));
        }
        Ok(Dataset {
            cities,
            params,
            weights,
            topology,
            schedule,
        })
    }

    pub fn total_population(&self) -> u64 {
        self.cities.iter().map(|c| c.population).sum()
    }

    pub fn city(&self, id: CityId) -> Option<&City> {
        self.cities.iter().find(|c| c.id == id)
    }

    /// Display names per city id, as used in cost and route reports.
    pub fn names(&self) -> BTreeMap<CityId, String> {
        self.cities
            .iter()
            .map(|c| (c.id, c.name.clone()))
            .collect()
    }
}

/// A parsed dataset together with the non-fatal issues found in it.
#[derive(Clone, Debug)]
pub struct LoadedDataset {
    pub dataset: Dataset,
    pub warnings: Vec<DatasetWarning>,
}

/// Non-fatal findings: the data is usable but worth a second look.
#[derive(Clone, Debug, PartialEq)]
pub enum DatasetWarning {
    /// Activity-class head counts disagree with the population figure by
    /// more than 2 percent.
    ActivityMismatch {
        city: CityId,
        name: String,
        counts_total: f64,
        population: u64,
    },
    /// The topology is not connected; some demand will be unroutable.
    Disconnected { components: usize },
    /// A link is longer than the last distance tier of the tariff grid.
    OverlongEdge {
        a: String,
        b: String,
        length_km: f64,
        max_km: f64,
    },
}

impl fmt::Display for DatasetWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetWarning::ActivityMismatch {
                city,
                name,
                counts_total,
                population,
            } => write!(
                f,
                "city {city} ({name}): activity classes sum to {counts_total}, \
                 more than 2% off the population {population}"
            ),
            DatasetWarning::Disconnected { components } => {
                write!(f, "topology splits into {components} components")
            }
            DatasetWarning::OverlongEdge {
                a,
                b,
                length_km,
                max_km,
            } => write!(
                f,
                "link {a}-{b} is {length_km} km, beyond the {max_km} km tariff grid"
            ),
        }
    }
}

/// Recomputes the soft findings for a dataset: activity counts off the
/// population, a disconnected topology, links beyond the tariff grid.
pub fn dataset_warnings(ds: &Dataset) -> Vec<DatasetWarning> {
    let mut out = Vec::new();
    for c in &ds.cities {
        if let Some(activity) = &c.activity {
            let total = activity.total();
            if (total - c.population as f64).abs() > 0.02 * c.population as f64 {
                out.push(DatasetWarning::ActivityMismatch {
                    city: c.id,
                    name: c.name.clone(),
                    counts_total: total,
                    population: c.population,
                });
            }
        }
    }
    let components = ds.topology.component_count();
    if components > 1 {
        out.push(DatasetWarning::Disconnected { components });
    }
    let max_km = ds.schedule.max_distance_km();
    let names = ds.names();
    let name = |id: CityId| names.get(&id).cloned().unwrap_or_else(|| id.to_string());
    for e in ds.topology.edges() {
        if e.length_km > max_km {
            out.push(DatasetWarning::OverlongEdge {
                a: name(e.a),
                b: name(e.b),
                length_km: e.length_km,
                max_km,
            });
        }
    }
    out
}

const CITIES_FILE: &str = "cities.csv";
const EDGES_FILE: &str = "edges.csv";
const PARAMS_FILE: &str = "params.csv";
const TARIFFS_FILE: &str = "tariffs.csv";

/// Loads and validates a dataset directory. `tariffs.csv` may be absent;
/// the built-in schedule is used then.
pub fn load_dataset(dir: &Path) -> Result<LoadedDataset, DatasetError> {
    let cities = parse_cities(CITIES_FILE, &read(dir, CITIES_FILE)?)?;
    let ids: HashSet<u32> = cities.iter().map(|c| c.id.0).collect();
    let edges = parse_edges(EDGES_FILE, &read(dir, EDGES_FILE)?, &ids)?;
    let (params, weights) = parse_params(PARAMS_FILE, &read(dir, PARAMS_FILE)?)?;
    let schedule = if dir.join(TARIFFS_FILE).is_file() {
        parse_tariffs(TARIFFS_FILE, &read(dir, TARIFFS_FILE)?)?
    } else {
        PriceSchedule::default()
    };
    let nodes = cities.iter().map(|c| c.id).collect();
    let topology = Topology::new(nodes, edges).map_err(|e| DatasetError::Invalid {
        file: EDGES_FILE.to_string(),
        message: e.to_string(),
    })?;
    let dataset = Dataset::new(cities, params, weights, topology, schedule)?;
    let warnings = dataset_warnings(&dataset);
    Ok(LoadedDataset { dataset, warnings })
}

/// The embedded 21-city, 30-link case study this toolkit was built around.
pub fn bundled_dataset() -> Dataset {
    let cities = parse_cities(CITIES_FILE, include_str!("../data/cities.csv"))
        .expect("bundled cities parse");
    let ids: HashSet<u32> = cities.iter().map(|c| c.id.0).collect();
    let edges = parse_edges(EDGES_FILE, include_str!("../data/edges.csv"), &ids)
        .expect("bundled edges parse");
    let (params, weights) = parse_params(PARAMS_FILE, include_str!("../data/params.csv"))
        .expect("bundled params parse");
    let schedule = parse_tariffs(TARIFFS_FILE, include_str!("../data/tariffs.csv"))
        .expect("bundled tariffs parse");
    let nodes = cities.iter().map(|c| c.id).collect();
    let topology = Topology::new(nodes, edges).expect("bundled topology");
    Dataset::new(cities, params, weights, topology, schedule).expect("bundled dataset")
}

/// Writes the four CSV files for `ds` into `dir`, creating it if needed.
/// The output loads back to an identical dataset.
pub fn write_dataset(ds: &Dataset, dir: &Path) -> Result<(), DatasetError> {
    let io_err = |path: &Path, source: std::io::Error| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let write = |file: &str, text: String| -> Result<(), DatasetError> {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| io_err(&path, e))
    };
    write(CITIES_FILE, render_cities(&ds.cities))?;
    write(EDGES_FILE, render_edges(ds.topology.edges()))?;
    write(PARAMS_FILE, render_params(&ds.params, &ds.weights))?;
    write(TARIFFS_FILE, render_tariffs(&ds.schedule))?;
    Ok(())
}

/// Short city codes accepted wherever a city can be named on the command
/// line, e.g. `SK` for Skopje or `SHT` for Shtip.
pub fn short_code(name: &str) -> Option<&'static str> {
    const CODES: &[(&str, &str)] = &[
        ("Struga", "ST"),
        ("Ohrid", "OH"),
        ("Bitola", "BT"),
        ("Debar", "DE"),
        ("Kicevo", "KI"),
        ("Krushevo", "KS"),
        ("Prilep", "PP"),
        ("Gostivar", "GV"),
        ("Tetovo", "TE"),
        ("Skopje", "SK"),
        ("Kumanovo", "KU"),
        ("Kriva Palanka", "KP"),
        ("Sveti Nikole", "SN"),
        ("Shtip", "SHT"),
        ("Veles", "VE"),
        ("Kocani", "KO"),
        ("Radovish", "RA"),
        ("Negotino", "NG"),
        ("Kavadarci", "KV"),
        ("Strumica", "SU"),
        ("Gevgelija", "GE"),
    ];
    CODES
        .iter()
        .find(|(n, _)| n.eq_ignore_ascii_case(name))
        .map(|(_, c)| *c)
}

fn read(dir: &Path, file: &str) -> Result<String, DatasetError> {
    let path = dir.join(file);
    fs::read_to_string(&path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            DatasetError::MissingFile { path }
        } else {
            DatasetError::Io { path, source }
        }
    })
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn malformed(file: &str, line: u64, message: impl Into<String>) -> DatasetError {
    DatasetError::Malformed {
        file: file.to_string(),
        line,
        message: message.into(),
    }
}

fn csv_error(file: &str, e: &csv::Error) -> DatasetError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    malformed(file, line, e.to_string())
}

fn check_header(file: &str, rdr: &mut csv::Reader<&[u8]>, want: &[&str]) -> Result<(), DatasetError> {
    let got = rdr.headers().map_err(|e| csv_error(file, &e))?;
    if got.iter().ne(want.iter().copied()) {
        return Err(malformed(
            file,
            1,
            format!("header must be {:?}, found {:?}", want.join(","), got.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    Ok(())
}

struct Row<'a> {
    file: &'a str,
    line: u64,
    record: csv::StringRecord,
}

impl Row<'_> {
    fn field(&self, i: usize) -> &str {
        self.record.get(i).unwrap_or("")
    }

    fn parse<T: std::str::FromStr>(&self, i: usize, what: &str) -> Result<T, DatasetError> {
        let raw = self.field(i);
        raw.parse().map_err(|_| {
            malformed(self.file, self.line, format!("bad {what} {raw:?}"))
        })
    }

    fn parse_opt<T: std::str::FromStr>(&self, i: usize, what: &str) -> Result<Option<T>, DatasetError> {
        if self.field(i).is_empty() {
            Ok(None)
        } else {
            self.parse(i, what).map(Some)
        }
    }

    fn err(&self, message: impl Into<String>) -> DatasetError {
        malformed(self.file, self.line, message)
    }
}

fn for_each_row(
    file: &str,
    text: &str,
    header: &[&str],
    mut f: impl FnMut(Row<'_>) -> Result<(), DatasetError>,
) -> Result<(), DatasetError> {
    let mut rdr = reader(text);
    check_header(file, &mut rdr, header)?;
    for result in rdr.records() {
        let record = result.map_err(|e| csv_error(file, &e))?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        f(Row { file, line, record })?;
    }
    Ok(())
}

fn parse_cities(file: &str, text: &str) -> Result<Vec<City>, DatasetError> {
    let mut cities: Vec<City> = Vec::new();
    let mut seen: HashMap<u32, u64> = HashMap::new();
    for_each_row(
        file,
        text,
        &["id", "name", "population", "sei", "i1", "i2", "i3", "i4", "i5", "i6"],
        |row| {
            let id: u32 = row.parse(0, "id")?;
            if let Some(prev) = seen.insert(id, row.line) {
                return Err(row.err(format!(
                    "duplicate city id {id}, first declared on line {prev}"
                )));
            }
            let name = row.field(1).to_string();
            if name.is_empty() {
                return Err(row.err("empty city name"));
            }
            let population: u64 = row.parse(2, "population")?;
            let sei: Option<f64> = row.parse_opt(3, "sei")?;
            if let Some(s) = sei {
                if !(s.is_finite() && (0.0..=1.0).contains(&s)) {
                    return Err(row.err(format!("sei {s} is outside [0, 1]")));
                }
            }
            let counts: Vec<Option<f64>> = (4..10)
                .map(|i| row.parse_opt(i, "activity count"))
                .collect::<Result<_, _>>()?;
            let given = counts.iter().flatten().count();
            let activity = match given {
                0 => None,
                6 => {
                    let v: Vec<f64> = counts.into_iter().flatten().collect();
                    if v.iter().any(|c| !c.is_finite() || *c < 0.0) {
                        return Err(row.err("activity counts must be non-negative"));
                    }
                    Some(ActivityCounts {
                        public_sector: v[0],
                        enterprise: v[1],
                        pupils: v[2],
                        students: v[3],
                        unemployed: v[4],
                        other: v[5],
                    })
                }
                _ => {
                    return Err(row.err("give all six activity counts or none"));
                }
            };
            match (sei.is_some(), activity.is_some()) {
                (true, true) => {
                    return Err(row.err("give either sei or activity counts, not both"));
                }
                (false, false) => {
                    return Err(row.err("give sei or all six activity counts"));
                }
                _ => {}
            }
            cities.push(City {
                id: CityId(id),
                name,
                population,
                activity,
                sei_override: sei,
            });
            Ok(())
        },
    )?;
    if cities.is_empty() {
        return Err(DatasetError::Invalid {
            file: file.to_string(),
            message: "no cities".to_string(),
        });
    }
    Ok(cities)
}

fn parse_edges(file: &str, text: &str, ids: &HashSet<u32>) -> Result<Vec<Edge>, DatasetError> {
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen: HashMap<(u32, u32), u64> = HashMap::new();
    for_each_row(file, text, &["a", "b", "length_km"], |row| {
        let a: u32 = row.parse(0, "city id")?;
        let b: u32 = row.parse(1, "city id")?;
        for id in [a, b] {
            if !ids.contains(&id) {
                return Err(row.err(format!("unknown city id {id}")));
            }
        }
        if a == b {
            return Err(row.err(format!("link from city {a} to itself")));
        }
        let length_km: f64 = row.parse(2, "length")?;
        if !(length_km.is_finite() && length_km > 0.0) {
            return Err(row.err(format!("length {length_km} km must be positive")));
        }
        let key = (a.min(b), a.max(b));
        if let Some(prev) = seen.insert(key, row.line) {
            return Err(row.err(format!(
                "duplicate link between {a} and {b}, first declared on line {prev}"
            )));
        }
        edges.push(Edge::new(CityId(a), CityId(b), length_km));
        Ok(())
    })?;
    Ok(edges)
}

const PARAM_KEYS: [&str; 14] = [
    "N",
    "commercial_share",
    "residential_share",
    "cc",
    "cl_hours",
    "cr",
    "rl_hours",
    "channel_kbps",
    "w1",
    "w2",
    "w3",
    "w4",
    "w5",
    "w6",
];

fn parse_params(file: &str, text: &str) -> Result<(TrafficParams, UsageWeights), DatasetError> {
    let mut values: HashMap<&'static str, f64> = HashMap::new();
    for_each_row(file, text, &["key", "value"], |row| {
        let key = row.field(0);
        let canonical = PARAM_KEYS
            .iter()
            .find(|k| **k == key)
            .ok_or_else(|| row.err(format!("unknown parameter {key:?}")))?;
        let value: f64 = row.parse(1, "value")?;
        if values.insert(canonical, value).is_some() {
            return Err(row.err(format!("parameter {key:?} given twice")));
        }
        Ok(())
    })?;
    let missing: Vec<&str> = PARAM_KEYS
        .iter()
        .copied()
        .filter(|k| !values.contains_key(k))
        .collect();
    if !missing.is_empty() {
        return Err(DatasetError::Invalid {
            file: file.to_string(),
            message: format!("missing parameters: {}", missing.join(", ")),
        });
    }
    let v = |k: &str| values[k];
    let params = TrafficParams {
        persons_per_household: v("N"),
        commercial_share: v("commercial_share"),
        residential_share: v("residential_share"),
        commercial_sessions_per_day: v("cc"),
        commercial_session_hours: v("cl_hours"),
        residential_sessions_per_day: v("cr"),
        residential_session_hours: v("rl_hours"),
        channel_kbps: v("channel_kbps"),
    };
    let weights = UsageWeights {
        public_sector: v("w1"),
        enterprise: v("w2"),
        pupils: v("w3"),
        students: v("w4"),
        unemployed: v("w5"),
        other: v("w6"),
    };
    Ok((params, weights))
}

fn parse_tariffs(file: &str, text: &str) -> Result<PriceSchedule, DatasetError> {
    let mut rows_seen: HashMap<(u64, u64), u64> = HashMap::new();
    let mut cells: Vec<(u64, f64, Money)> = Vec::new();
    for_each_row(file, text, &["capacity", "distance_km_max", "price_mkd"], |row| {
        let capacity: u64 = row.parse(0, "capacity")?;
        let distance: f64 = row.parse(1, "distance")?;
        if !(distance.is_finite() && distance > 0.0) {
            return Err(row.err(format!("distance bound {distance} km must be positive")));
        }
        let price: Money = row.parse(2, "price")?;
        if let Some(prev) = rows_seen.insert((capacity, distance.to_bits()), row.line) {
            return Err(row.err(format!(
                "capacity {capacity} at {distance} km priced twice, first on line {prev}"
            )));
        }
        cells.push((capacity, distance, price));
        Ok(())
    })?;
    let invalid = |message: String| DatasetError::Invalid {
        file: file.to_string(),
        message,
    };
    if cells.is_empty() {
        return Err(invalid("no tariff rows".to_string()));
    }
    let mut capacities: Vec<u64> = cells.iter().map(|c| c.0).collect();
    capacities.sort_unstable();
    capacities.dedup();
    let mut bounds: Vec<f64> = cells.iter().map(|c| c.1).collect();
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    let mut grid: Vec<Vec<Option<Money>>> = vec![vec![None; bounds.len()]; capacities.len()];
    for (cap, dist, price) in &cells {
        let ci = capacities.binary_search(cap).unwrap();
        let di = bounds.iter().position(|b| b == dist).unwrap();
        grid[ci][di] = Some(*price);
    }
    let mut prices = Vec::with_capacity(capacities.len());
    for (ci, row) in grid.into_iter().enumerate() {
        let mut out = Vec::with_capacity(bounds.len());
        for (di, cell) in row.into_iter().enumerate() {
            out.push(cell.ok_or_else(|| {
                invalid(format!(
                    "capacity {} has no price for the {} km tier",
                    capacities[ci], bounds[di]
                ))
            })?);
        }
        prices.push(out);
    }
    PriceSchedule::new(
        capacities.into_iter().map(Capacity).collect(),
        bounds,
        prices,
    )
    .map_err(|e| invalid(e.to_string()))
}

fn render_cities(cities: &[City]) -> String {
    let mut out = String::from("id,name,population,sei,i1,i2,i3,i4,i5,i6\n");
    for c in cities {
        let mut fields = vec![
            c.id.to_string(),
            c.name.clone(),
            c.population.to_string(),
        ];
        match (c.sei_override, &c.activity) {
            (Some(s), _) => {
                fields.push(s.to_string());
                fields.extend(std::iter::repeat(String::new()).take(6));
            }
            (None, Some(a)) => {
                fields.push(String::new());
                for v in [a.public_sector, a.enterprise, a.pupils, a.students, a.unemployed, a.other] {
                    fields.push(v.to_string());
                }
            }
            (None, None) => unreachable!("validated on construction"),
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn render_edges(edges: &[Edge]) -> String {
    let mut out = String::from("a,b,length_km\n");
    for e in edges {
        out.push_str(&format!("{},{},{}\n", e.a, e.b, e.length_km));
    }
    out
}

fn render_params(params: &TrafficParams, weights: &UsageWeights) -> String {
    let pairs: [(&str, f64); 14] = [
        ("N", params.persons_per_household),
        ("commercial_share", params.commercial_share),
        ("residential_share", params.residential_share),
        ("cc", params.commercial_sessions_per_day),
        ("cl_hours", params.commercial_session_hours),
        ("cr", params.residential_sessions_per_day),
        ("rl_hours", params.residential_session_hours),
        ("channel_kbps", params.channel_kbps),
        ("w1", weights.public_sector),
        ("w2", weights.enterprise),
        ("w3", weights.pupils),
        ("w4", weights.students),
        ("w5", weights.unemployed),
        ("w6", weights.other),
    ];
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn render_tariffs(schedule: &PriceSchedule) -> String {
    let mut out = String::from("capacity,distance_km_max,price_mkd\n");
    for (ci, cap) in schedule.capacities().iter().enumerate() {
        for (di, bound) in schedule.distance_bounds_km().iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", cap.0, bound, schedule.price_at(ci, di)));
        }
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing required file {path}")]
    MissingFile { path: PathBuf },
    #[error("{file}:{line}: {message}")]
    Malformed {
        file: String,
        line: u64,
        message: String,
    },
    #[error("{file}: {message}")]
    Invalid { file: String, message: String },
}

impl DatasetError {
    /// True for problems reading or parsing the files themselves, as
    /// opposed to data that parsed but failed validation.
    pub fn is_read_failure(&self) -> bool {
        matches!(
            self,
            DatasetError::Io { .. } | DatasetError::MissingFile { .. } | DatasetError::Malformed { .. }
        )
    }
}
