//! Stage runners shared by the subcommands, plus the error-to-exit-code
//! mapping. Exit codes: 1 for validation problems, 2 for unroutable
//! demand, 3 for anything that failed to read or parse.

use std::path::Path;

use wanplan_core::{
    assign_loads, build_demand_matrix, bundled_dataset, city_traffic, dataset_warnings, dijkstra,
    floyd_warshall, load_dataset, network_cost, short_code, size_links, CityId, CityTraffic,
    CostQuote, CostingError, Dataset, DatasetError, DemandMatrix, DemandMode, DemographicsError,
    LinkLoad, LinkSizing, LoadScope, LoadedDataset, LoadingError, OverlengthPolicy, RoutingError,
    UnroutableDemand,
};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn unroutable(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        if e.is_read_failure() {
            Failure::io(e.to_string())
        } else {
            Failure::validation(e.to_string())
        }
    }
}

impl From<DemographicsError> for Failure {
    fn from(e: DemographicsError) -> Self {
        Failure::validation(e.to_string())
    }
}

impl From<RoutingError> for Failure {
    fn from(e: RoutingError) -> Self {
        match e {
            RoutingError::Unreachable { .. } => Failure::unroutable(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<LoadingError> for Failure {
    fn from(e: LoadingError) -> Self {
        match e {
            LoadingError::Unroutable { .. } => Failure::unroutable(e.to_string()),
            _ => Failure::validation(e.to_string()),
        }
    }
}

impl From<CostingError> for Failure {
    fn from(e: CostingError) -> Self {
        Failure::validation(e.to_string())
    }
}

/// Loads the given directory, or the bundled dataset when none is given.
pub fn load(data: Option<&Path>) -> Result<LoadedDataset, Failure> {
    match data {
        Some(dir) => Ok(load_dataset(dir)?),
        None => {
            let dataset = bundled_dataset();
            let warnings = dataset_warnings(&dataset);
            Ok(LoadedDataset { dataset, warnings })
        }
    }
}

/// Like [`load`], but repeats the warnings on the error stream so reports
/// on standard output stay clean.
pub fn load_noted(data: Option<&Path>) -> Result<LoadedDataset, Failure> {
    let loaded = load(data)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    Ok(loaded)
}

/// Accepts a city id, an exact name, a short code, or a unique name prefix.
pub fn resolve_city(ds: &Dataset, text: &str) -> Result<CityId, Failure> {
    if text.chars().all(|c| c.is_ascii_digit()) && !text.is_empty() {
        let id: u32 = text
            .parse()
            .map_err(|_| Failure::validation(format!("bad city id {text:?}")))?;
        return if ds.city(CityId(id)).is_some() {
            Ok(CityId(id))
        } else {
            Err(Failure::validation(format!("unknown city id {id}")))
        };
    }
    if let Some(c) = ds.cities.iter().find(|c| c.name.eq_ignore_ascii_case(text)) {
        return Ok(c.id);
    }
    if let Some(c) = ds
        .cities
        .iter()
        .find(|c| short_code(&c.name).is_some_and(|code| code.eq_ignore_ascii_case(text)))
    {
        return Ok(c.id);
    }
    let lower = text.to_lowercase();
    let matches: Vec<&wanplan_core::City> = ds
        .cities
        .iter()
        .filter(|c| c.name.to_lowercase().starts_with(&lower))
        .collect();
    match matches.len() {
        1 => Ok(matches[0].id),
        0 => Err(Failure::validation(format!("unknown city {text:?}"))),
        _ => Err(Failure::validation(format!(
            "ambiguous city {text:?}: matches {}",
            matches
                .iter()
                .map(|c| c.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

pub fn traffic_of(ds: &Dataset) -> Result<Vec<CityTraffic>, Failure> {
    ds.cities
        .iter()
        .map(|c| city_traffic(c, &ds.params, &ds.weights).map_err(Failure::from))
        .collect()
}

pub fn demand_of(traffic: &[CityTraffic], mode: DemandMode) -> Result<DemandMatrix, Failure> {
    Ok(build_demand_matrix(traffic, mode)?)
}

/// One computed route; `path` runs from source to destination inclusive.
pub struct Route {
    pub from: CityId,
    pub to: CityId,
    pub distance_km: f64,
    pub path: Vec<CityId>,
}

/// Routes from `source` to `target`, or to every reachable city when no
/// target is given, ordered by distance. An explicit unreachable target is
/// an unroutable-demand failure.
pub fn routes_from(
    ds: &Dataset,
    source: CityId,
    target: Option<CityId>,
    all_pairs_algorithm: bool,
) -> Result<Vec<Route>, Failure> {
    // Both engines produce the same canonical routes; the flag only picks
    // which one does the work.
    let (single, all) = if all_pairs_algorithm {
        (None, Some(floyd_warshall(&ds.topology)))
    } else {
        (Some(dijkstra(&ds.topology, source)?), None)
    };
    let route_to = |to: CityId| -> Result<Option<Route>, Failure> {
        let (distance, path) = match (&single, &all) {
            (Some(r), _) => match r.distance(to) {
                Some(d) => (d, r.path(to)?),
                None => return Ok(None),
            },
            (_, Some(m)) => match m.distance(source, to) {
                Some(d) => (d, m.path(source, to)?),
                None => return Ok(None),
            },
            _ => unreachable!(),
        };
        Ok(Some(Route {
            from: source,
            to,
            distance_km: distance,
            path,
        }))
    };
    match target {
        Some(to) => match route_to(to)? {
            Some(r) => Ok(vec![r]),
            None => Err(Failure::unroutable(format!(
                "no route from {} to {}",
                name_of(ds, source),
                name_of(ds, to)
            ))),
        },
        None => {
            let mut routes = Vec::new();
            for &to in ds.topology.nodes() {
                if to == source {
                    continue;
                }
                if let Some(r) = route_to(to)? {
                    routes.push(r);
                }
            }
            routes.sort_by(|a, b| {
                a.distance_km
                    .total_cmp(&b.distance_km)
                    .then(a.to.cmp(&b.to))
            });
            Ok(routes)
        }
    }
}

pub fn name_of(ds: &Dataset, id: CityId) -> String {
    ds.city(id)
        .map(|c| c.name.clone())
        .unwrap_or_else(|| id.to_string())
}

/// Full load assignment under the canonical routes, heaviest link first.
pub fn loads_of(ds: &Dataset, scope: LoadScope) -> Result<Vec<LinkLoad>, Failure> {
    let traffic = traffic_of(ds)?;
    let demand = demand_of(&traffic, DemandMode::Symmetrized)?;
    let paths = floyd_warshall(&ds.topology);
    let assignment = assign_loads(&ds.topology, &demand, &paths, scope, UnroutableDemand::Fail)?;
    let mut loads = assignment.loads;
    loads.sort_by(|a, b| {
        b.erlangs
            .total_cmp(&a.erlangs)
            .then(a.edge.key().cmp(&b.edge.key()))
    });
    Ok(loads)
}

pub fn sizings_of(ds: &Dataset, loads: &[LinkLoad]) -> Vec<LinkSizing> {
    size_links(loads, ds.params.channel_kbps, ds.schedule.capacities())
}

pub fn quote_of(
    ds: &Dataset,
    sizings: &[LinkSizing],
    policy: OverlengthPolicy,
) -> Result<CostQuote, Failure> {
    Ok(network_cost(sizings, &ds.names(), &ds.schedule, policy)?)
}

/// Everything the `plan` subcommand reports, computed in one pass.
pub fn full_plan(
    loaded: &LoadedDataset,
    scope: LoadScope,
    policy: OverlengthPolicy,
) -> Result<crate::render::PlanReport, Failure> {
    let ds = &loaded.dataset;
    let traffic = traffic_of(ds)?;
    let demand = demand_of(&traffic, DemandMode::Symmetrized)?;
    let paths = floyd_warshall(&ds.topology);
    let mut routes = Vec::new();
    for (i, &a) in ds.topology.nodes().iter().enumerate() {
        for &b in &ds.topology.nodes()[i + 1..] {
            if let Some(d) = paths.distance(a, b) {
                routes.push(Route {
                    from: a,
                    to: b,
                    distance_km: d,
                    path: paths.path(a, b)?,
                });
            }
        }
    }
    let loads = loads_of(ds, scope)?;
    let sizings = sizings_of(ds, &loads);
    let quote = quote_of(ds, &sizings, policy)?;
    Ok(crate::render::PlanReport::new(
        loaded, scope, policy, &traffic, &demand, &routes, &loads, &sizings, &quote,
    ))
}
