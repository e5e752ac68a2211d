//! Subscriber-demographics traffic model.
//!
//! A city is described by its population and a socioeconomic profile. Offered
//! traffic is estimated from household counts and per-household usage
//! assumptions, split into a commercial and a residential part, then scaled by
//! a socioeconomic indicator (SEI) to get the traffic the network actually
//! carries. City-to-city demand distributes each city's carried traffic over
//! the other cities proportionally to their population.

use std::fmt;

use crate::CityId;

/// Head counts for the six activity classes a population is split into.
/// Counts may be fractional; they usually come from survey projections.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActivityCounts {
    /// Employees in the public sector.
    pub public_sector: f64,
    /// Employees in private enterprises.
    pub enterprise: f64,
    /// Elementary and high-school pupils.
    pub pupils: f64,
    /// University students.
    pub students: f64,
    /// Unemployed persons.
    pub unemployed: f64,
    /// Everyone not in the other five classes.
    pub other: f64,
}

/// The six activity classes as shares of the population, each in `[0, 1]`
/// when the counts are consistent with the population figure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActivityShares {
    pub public_sector: f64,
    pub enterprise: f64,
    pub pupils: f64,
    pub students: f64,
    pub unemployed: f64,
    pub other: f64,
}

/// Per-class weights expressing how intensely each activity class uses
/// data services. Non-negative; they do not have to sum to one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UsageWeights {
    pub public_sector: f64,
    pub enterprise: f64,
    pub pupils: f64,
    pub students: f64,
    pub unemployed: f64,
    pub other: f64,
}

impl ActivityCounts {
    pub fn total(&self) -> f64 {
        self.public_sector + self.enterprise + self.pupils + self.students + self.unemployed
            + self.other
    }

    fn as_array(&self) -> [f64; 6] {
        [
            self.public_sector,
            self.enterprise,
            self.pupils,
            self.students,
            self.unemployed,
            self.other,
        ]
    }
}

impl UsageWeights {
    pub fn validate(&self) -> Result<(), DemographicsError> {
        for (i, w) in self.as_array().iter().enumerate() {
            if !w.is_finite() || *w < 0.0 {
                return Err(DemographicsError::InvalidWeights(format!(
                    "weight {} is {}, expected a non-negative finite value",
                    i + 1,
                    w
                )));
            }
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 6] {
        [
            self.public_sector,
            self.enterprise,
            self.pupils,
            self.students,
            self.unemployed,
            self.other,
        ]
    }
}

/// Usage assumptions and household size driving the traffic estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrafficParams {
    /// Average persons per household; divides population into subscribers.
    pub persons_per_household: f64,
    /// Fraction of households counted as commercial users.
    pub commercial_share: f64,
    /// Fraction of households counted as residential users.
    pub residential_share: f64,
    /// Sessions per day for a commercial subscriber.
    pub commercial_sessions_per_day: f64,
    /// Duration of one commercial session, in hours.
    pub commercial_session_hours: f64,
    /// Sessions per day for a residential subscriber.
    pub residential_sessions_per_day: f64,
    /// Duration of one residential session, in hours.
    pub residential_session_hours: f64,
    /// Channel rate one Erlang of traffic occupies, in kbit/s.
    pub channel_kbps: f64,
}

impl TrafficParams {
    pub fn validate(&self) -> Result<(), DemographicsError> {
        let bad = |what: &str, v: f64| {
            Err(DemographicsError::InvalidParams(format!("{what} is {v}")))
        };
        if !(self.persons_per_household.is_finite() && self.persons_per_household > 0.0) {
            return bad("persons_per_household", self.persons_per_household);
        }
        if !(self.channel_kbps.is_finite() && self.channel_kbps > 0.0) {
            return bad("channel_kbps", self.channel_kbps);
        }
        for (what, v) in [
            ("commercial_share", self.commercial_share),
            ("residential_share", self.residential_share),
            ("commercial_sessions_per_day", self.commercial_sessions_per_day),
            ("commercial_session_hours", self.commercial_session_hours),
            ("residential_sessions_per_day", self.residential_sessions_per_day),
            ("residential_session_hours", self.residential_session_hours),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(what, v);
            }
        }
        Ok(())
    }
}

impl Default for TrafficParams {
    /// The household size and usage pattern the bundled dataset was surveyed
    /// with: 3.5 persons per household, a 15/85 commercial/residential split,
    /// four half-hour commercial sessions and one half-hour residential
    /// session per day, on 64 kbit/s channels.
    fn default() -> Self {
        TrafficParams {
            persons_per_household: 3.5,
            commercial_share: 0.15,
            residential_share: 0.85,
            commercial_sessions_per_day: 4.0,
            commercial_session_hours: 0.5,
            residential_sessions_per_day: 1.0,
            residential_session_hours: 0.5,
            channel_kbps: 64.0,
        }
    }
}

impl Default for UsageWeights {
    /// Weights calibrated against national ICT-usage statistics: heaviest
    /// for pupils and students, lightest for the unemployed and unclassified.
    fn default() -> Self {
        UsageWeights {
            public_sector: 0.720,
            enterprise: 0.360,
            pupils: 0.964,
            students: 0.964,
            unemployed: 0.25,
            other: 0.25,
        }
    }
}

/// One node of the planned network.
#[derive(Clone, Debug, PartialEq)]
pub struct City {
    pub id: CityId,
    pub name: String,
    pub population: u64,
    /// Activity-class head counts, when the profile is given in raw form.
    pub activity: Option<ActivityCounts>,
    /// Pre-computed socioeconomic indicator; takes precedence over `activity`.
    pub sei_override: Option<f64>,
}

/// Traffic figures derived for one city.
#[derive(Clone, Debug)]
pub struct CityTraffic {
    pub city: City,
    pub households: f64,
    /// Busy-share of the commercial sessions, in Erlangs.
    pub commercial_erlangs: f64,
    /// Busy-share of the residential sessions, in Erlangs.
    pub residential_erlangs: f64,
    /// Commercial plus residential Erlangs before socioeconomic scaling.
    pub offered_erlangs: f64,
    pub sei: f64,
    /// `offered_erlangs * sei`; what the network is dimensioned for.
    pub carried_erlangs: f64,
}

/// Number of households in a city: population over household size.
pub fn households(population: u64, params: &TrafficParams) -> f64 {
    population as f64 / params.persons_per_household
}

/// Converts activity head counts to population shares.
pub fn activity_shares(
    counts: &ActivityCounts,
    population: u64,
) -> Result<ActivityShares, DemographicsError> {
    if population == 0 {
        return Err(DemographicsError::ZeroPopulation);
    }
    let p = population as f64;
    let a = counts.as_array().map(|c| c / p);
    Ok(ActivityShares {
        public_sector: a[0],
        enterprise: a[1],
        pupils: a[2],
        students: a[3],
        unemployed: a[4],
        other: a[5],
    })
}

/// Socioeconomic indicator: the weighted sum of the activity shares.
/// Scale-invariant in the underlying counts, since shares already are.
pub fn sei(shares: &ActivityShares, weights: &UsageWeights) -> f64 {
    let s = [
        shares.public_sector,
        shares.enterprise,
        shares.pupils,
        shares.students,
        shares.unemployed,
        shares.other,
    ];
    s.iter().zip(weights.as_array()).map(|(a, w)| a * w).sum()
}

/// Derives household, offered and carried traffic figures for one city.
///
/// The offered Erlangs are the fraction of the day the subscribers keep a
/// channel busy: `share * households * sessions * hours / 24` for each of the
/// commercial and residential parts. The SEI comes from `sei_override` when
/// set, otherwise from the activity profile.
pub fn city_traffic(
    city: &City,
    params: &TrafficParams,
    weights: &UsageWeights,
) -> Result<CityTraffic, DemographicsError> {
    params.validate()?;
    weights.validate()?;
    let sei_value = match (city.sei_override, &city.activity) {
        (Some(s), _) => s,
        (None, Some(counts)) => sei(&activity_shares(counts, city.population)?, weights),
        (None, None) => return Err(DemographicsError::MissingSeiSource(city.id)),
    };
    let t = households(city.population, params);
    let commercial = params.commercial_share
        * t
        * params.commercial_sessions_per_day
        * params.commercial_session_hours
        / 24.0;
    let residential = params.residential_share
        * t
        * params.residential_sessions_per_day
        * params.residential_session_hours
        / 24.0;
    let offered = commercial + residential;
    Ok(CityTraffic {
        city: city.clone(),
        households: t,
        commercial_erlangs: commercial,
        residential_erlangs: residential,
        offered_erlangs: offered,
        sei: sei_value,
        carried_erlangs: offered * sei_value,
    })
}

/// Demand one city directs at another: the source's carried traffic times the
/// destination's share of the total population.
pub fn pair_demand(
    source_carried_erlangs: f64,
    dest_population: u64,
    total_population: u64,
) -> Result<f64, DemographicsError> {
    if total_population == 0 {
        return Err(DemographicsError::ZeroTotalPopulation);
    }
    Ok(source_carried_erlangs * dest_population as f64 / total_population as f64)
}

/// Whether a demand matrix holds one-way figures or the per-pair average.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DemandMode {
    Directed,
    Symmetrized,
}

impl fmt::Display for DemandMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DemandMode::Directed => "directed",
            DemandMode::Symmetrized => "symmetrized",
        })
    }
}

/// City-by-city demand in Erlangs, zero on the diagonal.
#[derive(Clone, Debug)]
pub struct DemandMatrix {
    mode: DemandMode,
    order: Vec<CityId>,
    entries: Vec<Vec<f64>>,
}

impl DemandMatrix {
    pub fn mode(&self) -> DemandMode {
        self.mode
    }

    /// City ids in row/column order.
    pub fn order(&self) -> &[CityId] {
        &self.order
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn index_of(&self, id: CityId) -> Option<usize> {
        self.order.iter().position(|c| *c == id)
    }

    /// Demand from `a` to `b`; `None` when either city is not in the matrix.
    pub fn get(&self, a: CityId, b: CityId) -> Option<f64> {
        let i = self.index_of(a)?;
        let j = self.index_of(b)?;
        Some(self.entries[i][j])
    }

    pub fn row_sum(&self, a: CityId) -> Option<f64> {
        let i = self.index_of(a)?;
        Some(self.entries[i].iter().sum())
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    /// Averages each pair of opposite entries. Idempotent.
    pub fn symmetrized(&self) -> DemandMatrix {
        let n = self.order.len();
        let mut entries = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                entries[i][j] = (self.entries[i][j] + self.entries[j][i]) / 2.0;
            }
        }
        DemandMatrix {
            mode: DemandMode::Symmetrized,
            order: self.order.clone(),
            entries,
        }
    }
}

/// Builds the full demand matrix from per-city traffic figures.
pub fn build_demand_matrix(
    traffic: &[CityTraffic],
    mode: DemandMode,
) -> Result<DemandMatrix, DemographicsError> {
    let mut order: Vec<CityId> = Vec::with_capacity(traffic.len());
    for t in traffic {
        if order.contains(&t.city.id) {
            return Err(DemographicsError::DuplicateCityId(t.city.id));
        }
        order.push(t.city.id);
    }
    let total_population: u64 = traffic.iter().map(|t| t.city.population).sum();
    let n = traffic.len();
    let mut entries = vec![vec![0.0; n]; n];
    for (i, src) in traffic.iter().enumerate() {
        for (j, dst) in traffic.iter().enumerate() {
            if i == j {
                continue;
            }
            entries[i][j] = pair_demand(
                src.carried_erlangs,
                dst.city.population,
                total_population,
            )?;
        }
    }
    let directed = DemandMatrix {
        mode: DemandMode::Directed,
        order,
        entries,
    };
    Ok(match mode {
        DemandMode::Directed => directed,
        DemandMode::Symmetrized => directed.symmetrized(),
    })
}

#[derive(Debug, thiserror::Error)]
pub enum DemographicsError {
    #[error("invalid traffic parameters: {0}")]
    InvalidParams(String),
    #[error("invalid usage weights: {0}")]
    InvalidWeights(String),
    #[error("cannot derive activity shares for a zero population")]
    ZeroPopulation,
    #[error("city {0} has neither an SEI value nor activity counts")]
    MissingSeiSource(CityId),
    #[error("duplicate city id {0}")]
    DuplicateCityId(CityId),
    #[error("total population is zero")]
    ZeroTotalPopulation,
}
