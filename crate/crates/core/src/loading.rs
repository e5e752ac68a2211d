//! Turns city-pair demand into per-link loads and bandwidth requirements.
//!
//! Every unordered city pair contributes its (symmetrized) demand to the
//! links of its canonical shortest path. Loads convert to bits per second via
//! the channel rate, then each link is snapped to the smallest standard
//! capacity that fits; demand above the largest capacity takes several
//! parallel lines.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::demographics::{DemandMatrix, DemandMode};
use crate::routing::{DistanceMatrix, Edge, Topology};
use crate::CityId;

/// Which demand an edge accumulates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadScope {
    /// Every pair whose route crosses the edge. This is the planning answer.
    All,
    /// Only pairs with one endpoint on the edge itself. A coarser view some
    /// dimensioning tables are built from; never larger than `All`.
    EndpointOnly,
}

impl fmt::Display for LoadScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LoadScope::All => "all",
            LoadScope::EndpointOnly => "endpoint_only",
        })
    }
}

/// What to do with a positive demand between cities that have no route.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnroutableDemand {
    Fail,
    Skip,
}

/// Accumulated traffic on one link.
#[derive(Clone, Debug)]
pub struct LinkLoad {
    pub edge: Edge,
    pub erlangs: f64,
    /// Number of city pairs whose contribution landed on this link.
    pub contributors: usize,
}

/// Result of [`assign_loads`]: one entry per topology edge, in declared edge
/// order, links on no route included with zero load.
#[derive(Clone, Debug)]
pub struct LoadAssignment {
    pub loads: Vec<LinkLoad>,
    /// Pairs with positive demand but no route, present only under
    /// [`UnroutableDemand::Skip`].
    pub skipped: Vec<(CityId, CityId)>,
}

impl LoadAssignment {
    pub fn total_erlangs(&self) -> f64 {
        self.loads.iter().map(|l| l.erlangs).sum()
    }

    pub fn load_between(&self, a: CityId, b: CityId) -> Option<&LinkLoad> {
        let key = Edge::new(a, b, 1.0).key();
        self.loads.iter().find(|l| l.edge.key() == key)
    }
}

/// Routes every pair's demand over its canonical path and accumulates the
/// result per link.
///
/// `demand` must be symmetrized (each unordered pair is walked once) and
/// cover the same city set as `paths` and `topology`. Pairs with zero demand
/// contribute nothing and do not count as contributors.
pub fn assign_loads(
    topology: &Topology,
    demand: &DemandMatrix,
    paths: &DistanceMatrix,
    scope: LoadScope,
    on_unroutable: UnroutableDemand,
) -> Result<LoadAssignment, LoadingError> {
    if demand.mode() != DemandMode::Symmetrized {
        return Err(LoadingError::DirectedDemand);
    }
    let mut demand_ids: Vec<CityId> = demand.order().to_vec();
    demand_ids.sort();
    let mut path_ids: Vec<CityId> = paths.order().to_vec();
    path_ids.sort();
    if demand_ids != topology.nodes() || path_ids != topology.nodes() {
        return Err(LoadingError::NodeSetMismatch);
    }

    let index_of_edge: BTreeMap<(CityId, CityId), usize> = topology
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| (e.key(), i))
        .collect();
    let mut loads: Vec<LinkLoad> = topology
        .edges()
        .iter()
        .map(|e| LinkLoad {
            edge: *e,
            erlangs: 0.0,
            contributors: 0,
        })
        .collect();
    let mut skipped = Vec::new();

    let nodes = topology.nodes();
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            let d = demand.get(a, b).expect("node sets were checked");
            if d <= 0.0 {
                continue;
            }
            let path = match paths.path(a, b) {
                Ok(p) => p,
                Err(_) => match on_unroutable {
                    UnroutableDemand::Fail => {
                        return Err(LoadingError::Unroutable { a, b });
                    }
                    UnroutableDemand::Skip => {
                        skipped.push((a, b));
                        continue;
                    }
                },
            };
            for hop in path.windows(2) {
                let key = Edge::new(hop[0], hop[1], 1.0).key();
                if scope == LoadScope::EndpointOnly
                    && !(hop.contains(&a) || hop.contains(&b))
                {
                    continue;
                }
                let slot = &mut loads[index_of_edge[&key]];
                slot.erlangs += d;
                slot.contributors += 1;
            }
        }
    }
    Ok(LoadAssignment { loads, skipped })
}

/// Standard transmission capacity, in bits per second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Capacity(pub u64);

impl Capacity {
    pub fn bps(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 >= 1_000_000 && self.0 % 1_000_000 == 0 {
            write!(f, "{} Mbit/s", self.0 / 1_000_000)
        } else if self.0 >= 1_000 && self.0 % 1_000 == 0 {
            write!(f, "{} kbit/s", self.0 / 1_000)
        } else {
            write!(f, "{} bit/s", self.0)
        }
    }
}

impl FromStr for Capacity {
    type Err = std::num::ParseIntError;

    /// Parses a raw bits-per-second figure, e.g. `2000000`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Capacity)
    }
}

/// Bits per second a given load needs: Erlangs times the channel rate.
pub fn bandwidth_of(erlangs: f64, channel_kbps: f64) -> f64 {
    erlangs * channel_kbps * 1000.0
}

/// Smallest capacity from `tiers` that fits `bandwidth_bps`, and how many
/// lines of it. Boundaries are inclusive; bandwidth above the largest tier
/// takes as many lines of that tier as needed, never zero.
///
/// `tiers` must be non-empty and strictly ascending.
pub fn classify_tier(bandwidth_bps: f64, tiers: &[Capacity]) -> (Capacity, u32) {
    assert!(!tiers.is_empty(), "capacity tier list is empty");
    assert!(
        tiers.windows(2).all(|w| w[0] < w[1]),
        "capacity tiers must be strictly ascending"
    );
    for &tier in tiers {
        if bandwidth_bps <= tier.bps() as f64 {
            return (tier, 1);
        }
    }
    let top = *tiers.last().unwrap();
    let lines = (bandwidth_bps / top.bps() as f64).ceil() as u32;
    (top, lines.max(1))
}

/// One link's bandwidth requirement and the capacity chosen for it.
#[derive(Clone, Debug)]
pub struct LinkSizing {
    pub edge: Edge,
    pub erlangs: f64,
    pub bandwidth_bps: f64,
    pub tier: Capacity,
    pub line_count: u32,
}

/// Sizes every loaded link against the capacity ladder.
pub fn size_links(loads: &[LinkLoad], channel_kbps: f64, tiers: &[Capacity]) -> Vec<LinkSizing> {
    loads
        .iter()
        .map(|l| {
            let bandwidth_bps = bandwidth_of(l.erlangs, channel_kbps);
            let (tier, line_count) = classify_tier(bandwidth_bps, tiers);
            LinkSizing {
                edge: l.edge,
                erlangs: l.erlangs,
                bandwidth_bps,
                tier,
                line_count,
            }
        })
        .collect()
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum LoadingError {
    #[error("demand matrix must be symmetrized before load assignment")]
    DirectedDemand,
    #[error("demand matrix, path matrix and topology cover different city sets")]
    NodeSetMismatch,
    #[error("positive demand between {a} and {b} but no route connects them")]
    Unroutable { a: CityId, b: CityId },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demographics::{build_demand_matrix, city_traffic, City, TrafficParams, UsageWeights};
    use crate::routing::floyd_warshall;
    use approx::assert_abs_diff_eq;

    fn city(id: u32, population: u64, sei: f64) -> City {
        City {
            id: CityId(id),
            name: format!("city-{id}"),
            population,
            activity: None,
            sei_override: Some(sei),
        }
    }

    fn demand_for(cities: &[City]) -> DemandMatrix {
        let traffic: Vec<_> = cities
            .iter()
            .map(|c| city_traffic(c, &TrafficParams::default(), &UsageWeights::default()).unwrap())
            .collect();
        build_demand_matrix(&traffic, DemandMode::Symmetrized).unwrap()
    }

    fn path_graph() -> (Topology, Vec<City>) {
        let cities = vec![
            city(1, 30_000, 0.5),
            city(2, 60_000, 0.5),
            city(3, 90_000, 0.5),
        ];
        let t = Topology::new(
            cities.iter().map(|c| c.id).collect(),
            vec![
                Edge::new(CityId(1), CityId(2), 10.0),
                Edge::new(CityId(2), CityId(3), 20.0),
            ],
        )
        .unwrap();
        (t, cities)
    }

    #[test]
    fn middle_edge_carries_transit_demand() {
        let (t, cities) = path_graph();
        let demand = demand_for(&cities);
        let paths = floyd_warshall(&t);
        let assignment =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        let d12 = demand.get(CityId(1), CityId(2)).unwrap();
        let d13 = demand.get(CityId(1), CityId(3)).unwrap();
        let d23 = demand.get(CityId(2), CityId(3)).unwrap();
        let first = assignment.load_between(CityId(1), CityId(2)).unwrap();
        let second = assignment.load_between(CityId(2), CityId(3)).unwrap();
        assert_abs_diff_eq!(first.erlangs, d12 + d13, epsilon = 1e-9);
        assert_abs_diff_eq!(second.erlangs, d23 + d13, epsilon = 1e-9);
        assert_eq!(first.contributors, 2);
        assert_eq!(second.contributors, 2);
    }

    #[test]
    fn endpoint_scope_skips_pure_transit_hops() {
        // On a three-node path the 1-3 pair touches both edges (each edge has
        // one of its endpoints), so a longer chain is needed to see a skip.
        let cities = vec![
            city(1, 30_000, 0.5),
            city(2, 60_000, 0.5),
            city(3, 90_000, 0.5),
            city(4, 45_000, 0.5),
        ];
        let t = Topology::new(
            cities.iter().map(|c| c.id).collect(),
            vec![
                Edge::new(CityId(1), CityId(2), 10.0),
                Edge::new(CityId(2), CityId(3), 20.0),
                Edge::new(CityId(3), CityId(4), 30.0),
            ],
        )
        .unwrap();
        let demand = demand_for(&cities);
        let paths = floyd_warshall(&t);
        let all =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        let endpoint = assign_loads(
            &t,
            &demand,
            &paths,
            LoadScope::EndpointOnly,
            UnroutableDemand::Fail,
        )
        .unwrap();
        // The 1-4 pair crosses 2-3 without touching it.
        let d14 = demand.get(CityId(1), CityId(4)).unwrap();
        let all_mid = all.load_between(CityId(2), CityId(3)).unwrap().erlangs;
        let ep_mid = endpoint.load_between(CityId(2), CityId(3)).unwrap().erlangs;
        assert_abs_diff_eq!(all_mid - ep_mid, d14, epsilon = 1e-9);
        // And every edge is no heavier under the endpoint scope.
        for (a, e) in all.loads.iter().zip(&endpoint.loads) {
            assert!(e.erlangs <= a.erlangs + 1e-12);
        }
    }

    #[test]
    fn conservation_total_load_equals_demand_times_hops() {
        let (t, cities) = path_graph();
        let demand = demand_for(&cities);
        let paths = floyd_warshall(&t);
        let assignment =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        let mut expected = 0.0;
        let nodes = t.nodes();
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                let hops = paths.path(a, b).unwrap().len() - 1;
                expected += demand.get(a, b).unwrap() * hops as f64;
            }
        }
        let total = assignment.total_erlangs();
        assert_abs_diff_eq!(total, expected, epsilon = 1e-6 * expected);
    }

    #[test]
    fn directed_demand_is_rejected() {
        let (t, cities) = path_graph();
        let traffic: Vec<_> = cities
            .iter()
            .map(|c| city_traffic(c, &TrafficParams::default(), &UsageWeights::default()).unwrap())
            .collect();
        let directed = build_demand_matrix(&traffic, DemandMode::Directed).unwrap();
        let paths = floyd_warshall(&t);
        assert_eq!(
            assign_loads(&t, &directed, &paths, LoadScope::All, UnroutableDemand::Fail)
                .unwrap_err(),
            LoadingError::DirectedDemand
        );
    }

    #[test]
    fn unroutable_demand_respects_the_policy() {
        let cities = vec![city(1, 30_000, 0.5), city(2, 60_000, 0.5), city(3, 90_000, 0.5)];
        let t = Topology::new(
            cities.iter().map(|c| c.id).collect(),
            vec![Edge::new(CityId(1), CityId(2), 10.0)],
        )
        .unwrap();
        let demand = demand_for(&cities);
        let paths = floyd_warshall(&t);
        assert_eq!(
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail)
                .unwrap_err(),
            LoadingError::Unroutable {
                a: CityId(1),
                b: CityId(3)
            }
        );
        let skipped =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Skip).unwrap();
        assert_eq!(
            skipped.skipped,
            vec![(CityId(1), CityId(3)), (CityId(2), CityId(3))]
        );
        assert!(skipped.load_between(CityId(1), CityId(2)).unwrap().erlangs > 0.0);
    }

    #[test]
    fn unused_edges_report_zero_load() {
        // A shortcut so cheap nothing routes over the long way round.
        let cities = vec![city(1, 30_000, 0.5), city(2, 60_000, 0.5), city(3, 90_000, 0.5)];
        let t = Topology::new(
            cities.iter().map(|c| c.id).collect(),
            vec![
                Edge::new(CityId(1), CityId(2), 1.0),
                Edge::new(CityId(2), CityId(3), 1.0),
                Edge::new(CityId(1), CityId(3), 100.0),
            ],
        )
        .unwrap();
        let demand = demand_for(&cities);
        let paths = floyd_warshall(&t);
        let assignment =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        let unused = assignment.load_between(CityId(1), CityId(3)).unwrap();
        assert_eq!(unused.erlangs, 0.0);
        assert_eq!(unused.contributors, 0);
        assert_eq!(assignment.loads.len(), 3);
    }

    #[test]
    fn doubling_demand_doubles_every_load() {
        let (t, cities) = path_graph();
        let demand = demand_for(&cities);
        let doubled_cities: Vec<City> = cities
            .iter()
            .map(|c| City {
                sei_override: c.sei_override.map(|s| s * 2.0),
                ..c.clone()
            })
            .collect();
        let doubled = demand_for(&doubled_cities);
        let paths = floyd_warshall(&t);
        let base =
            assign_loads(&t, &demand, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        let twice =
            assign_loads(&t, &doubled, &paths, LoadScope::All, UnroutableDemand::Fail).unwrap();
        for (b, d) in base.loads.iter().zip(&twice.loads) {
            assert_abs_diff_eq!(d.erlangs, 2.0 * b.erlangs, epsilon = 1e-9);
        }
    }

    const TIERS: [Capacity; 4] = [
        Capacity(64_000),
        Capacity(2_000_000),
        Capacity(34_000_000),
        Capacity(155_000_000),
    ];

    #[test]
    fn bandwidth_is_erlangs_times_channel_rate() {
        assert_abs_diff_eq!(bandwidth_of(908.74, 64.0), 58_159_360.0, epsilon = 0.5);
        assert_abs_diff_eq!(bandwidth_of(9.6, 64.0), 614_400.0, epsilon = 0.5);
        assert_eq!(bandwidth_of(0.0, 64.0), 0.0);
    }

    #[test]
    fn tiers_are_inclusive_at_the_boundary() {
        assert_eq!(classify_tier(64_000.0, &TIERS), (Capacity(64_000), 1));
        assert_eq!(classify_tier(64_001.0, &TIERS), (Capacity(2_000_000), 1));
        assert_eq!(classify_tier(58_159_360.0, &TIERS), (Capacity(155_000_000), 1));
        assert_eq!(classify_tier(614_400.0, &TIERS), (Capacity(2_000_000), 1));
        assert_eq!(classify_tier(0.0, &TIERS), (Capacity(64_000), 1));
    }

    #[test]
    fn oversized_links_take_parallel_lines() {
        assert_eq!(
            classify_tier(155_000_001.0, &TIERS),
            (Capacity(155_000_000), 2)
        );
        assert_eq!(
            classify_tier(465_000_000.0, &TIERS),
            (Capacity(155_000_000), 3)
        );
    }

    #[test]
    fn capacity_labels_match_convention() {
        assert_eq!(Capacity(64_000).to_string(), "64 kbit/s");
        assert_eq!(Capacity(2_000_000).to_string(), "2 Mbit/s");
        assert_eq!(Capacity(155_000_000).to_string(), "155 Mbit/s");
        assert_eq!("34000000".parse::<Capacity>().unwrap(), Capacity(34_000_000));
    }

    #[test]
    fn size_links_combines_bandwidth_and_tier() {
        let load = LinkLoad {
            edge: Edge::new(CityId(1), CityId(2), 10.0),
            erlangs: 908.74,
            contributors: 19,
        };
        let sized = size_links(&[load], 64.0, &TIERS);
        assert_eq!(sized.len(), 1);
        assert_abs_diff_eq!(sized[0].bandwidth_bps, 58_159_360.0, epsilon = 0.5);
        assert_eq!(sized[0].tier, Capacity(155_000_000));
        assert_eq!(sized[0].line_count, 1);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn classification_is_monotone(b1 in 0.0..400e6f64, b2 in 0.0..400e6f64) {
                let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
                let (t1, n1) = classify_tier(lo, &TIERS);
                let (t2, n2) = classify_tier(hi, &TIERS);
                prop_assert!(t1 <= t2);
                prop_assert!(t1.bps() as f64 * f64::from(n1) <= t2.bps() as f64 * f64::from(n2));
                // Chosen capacity always covers the requirement.
                prop_assert!(t2.bps() as f64 * f64::from(n2) >= hi);
            }
        }
    }
}
