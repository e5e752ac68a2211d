//! Planning toolkit for regional backbone networks.
//!
//! The pipeline goes: city demographics -> offered and carried traffic ->
//! city-pair demand -> shortest-path routing -> per-link loads -> bandwidth
//! sizing -> leased-line cost. Each stage lives in its own module and can be
//! used on its own; [`dataset`] ties them together by loading the CSV inputs
//! (or the bundled reference network) into one validated [`Dataset`].

pub mod costing;
pub mod dataset;
pub mod demographics;
pub mod loading;
pub mod routing;

use std::fmt;
use std::num::ParseIntError;
use std::str::FromStr;

pub use costing::{
    adsl_annual_cost, atm_annual_cost, network_cost, rented_line_annual_cost, AccessTariff,
    AtmCost, AtmTariff, CostItem, CostQuote, CostingError, Currency, DuplexMode, Money,
    OverlengthPolicy, PriceSchedule,
};
pub use dataset::{
    bundled_dataset, dataset_warnings, load_dataset, short_code, write_dataset, Dataset,
    DatasetError, DatasetWarning, LoadedDataset,
};
pub use demographics::{
    activity_shares, build_demand_matrix, city_traffic, households, pair_demand, sei,
    ActivityCounts, ActivityShares, City, CityTraffic, DemandMatrix, DemandMode,
    DemographicsError, TrafficParams, UsageWeights,
};
pub use loading::{
    assign_loads, bandwidth_of, classify_tier, size_links, Capacity, LinkLoad, LinkSizing,
    LoadAssignment, LoadScope, LoadingError, UnroutableDemand,
};
pub use routing::{
    brute_force_distances, dijkstra, floyd_warshall, DistanceMatrix, Edge, RoutingError,
    ShortestPathResult, Topology,
};

/// Identifier a dataset assigns to a city. Ids need not be dense; wherever
/// ordering matters (matrix rows, tie-breaking) the numeric order is used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CityId(pub u32);

impl fmt::Display for CityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for CityId {
    type Err = ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(CityId)
    }
}

impl From<u32> for CityId {
    fn from(v: u32) -> Self {
        CityId(v)
    }
}
