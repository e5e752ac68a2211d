//! Shared pipeline driver for the benchmarks.

use wanplan_core::{
    assign_loads, build_demand_matrix, city_traffic, floyd_warshall, network_cost, size_links,
    CityTraffic, Dataset, DemandMode, LoadScope, Money, OverlengthPolicy, UnroutableDemand,
};

pub fn traffic_of(ds: &Dataset) -> Vec<CityTraffic> {
    ds.cities
        .iter()
        .map(|c| city_traffic(c, &ds.params, &ds.weights).expect("valid dataset"))
        .collect()
}

/// Demographics through costing in one pass; returns the annual total so
/// callers have a value to keep alive.
pub fn full_pipeline(ds: &Dataset) -> Money {
    let traffic = traffic_of(ds);
    let demand = build_demand_matrix(&traffic, DemandMode::Symmetrized).expect("demand");
    let paths = floyd_warshall(&ds.topology);
    let assignment = assign_loads(
        &ds.topology,
        &demand,
        &paths,
        LoadScope::All,
        UnroutableDemand::Fail,
    )
    .expect("routable");
    let sizings = size_links(&assignment.loads, ds.params.channel_kbps, ds.schedule.capacities());
    let quote = network_cost(&sizings, &ds.names(), &ds.schedule, OverlengthPolicy::Clamp)
        .expect("priceable");
    quote.annual_total
}
