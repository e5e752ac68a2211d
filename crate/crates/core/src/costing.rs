//! Cost models: leased-line tariffs by capacity and distance, annual cost of
//! three access technologies, and the total cost of a sized network.
//!
//! All money amounts are exact integers in hundredths of a denar (MKD);
//! nothing is rounded until display. The euro figure is a fixed-rate view at
//! 61 MKD per EUR, never used in arithmetic.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Sub};
use std::str::FromStr;

use crate::loading::{Capacity, LinkSizing};
use crate::CityId;

/// Fixed display rate: denars per euro.
pub const MKD_PER_EUR: i64 = 61;

/// Amount in hundredths of a denar. Arithmetic is exact; overflow panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i64);

impl Money {
    pub fn from_mkd(mkd: i64) -> Self {
        Money(mkd.checked_mul(100).expect("money overflow"))
    }

    pub fn from_hundredths(hundredths: i64) -> Self {
        Money(hundredths)
    }

    pub fn hundredths(&self) -> i64 {
        self.0
    }

    /// Whole denars, rounded half away from zero. Display-only.
    pub fn mkd_rounded(&self) -> i64 {
        let sign = if self.0 < 0 { -1 } else { 1 };
        sign * ((self.0.abs() + 50) / 100)
    }

    /// Euro view at the fixed rate. Display-only.
    pub fn eur(&self) -> f64 {
        self.0 as f64 / 100.0 / MKD_PER_EUR as f64
    }

    pub fn is_positive(&self) -> bool {
        self.0 > 0
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0.checked_add(rhs.0).expect("money overflow"))
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, rhs: Money) {
        *self = *self + rhs;
    }
}

impl Sub for Money {
    type Output = Money;
    fn sub(self, rhs: Money) -> Money {
        Money(self.0.checked_sub(rhs.0).expect("money overflow"))
    }
}

impl Mul<i64> for Money {
    type Output = Money;
    fn mul(self, rhs: i64) -> Money {
        Money(self.0.checked_mul(rhs).expect("money overflow"))
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money(0), |a, b| a + b)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        write!(f, "{}{}.{:02}", sign, self.0.abs() / 100, self.0.abs() % 100)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
#[error("invalid money amount {0:?}")]
pub struct ParseMoneyError(String);

impl FromStr for Money {
    type Err = ParseMoneyError;

    /// Accepts a denar amount with at most two decimals, e.g. `3733`,
    /// `3733.0` or `3733.00`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseMoneyError(s.to_string());
        let (negative, rest) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (whole, frac) = match rest.split_once('.') {
            Some((w, f)) => (w, f),
            None => (rest, ""),
        };
        if whole.is_empty() || frac.len() > 2 {
            return Err(bad());
        }
        if !whole.bytes().all(|b| b.is_ascii_digit()) || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: i64 = whole.parse().map_err(|_| bad())?;
        let mut cents: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        if frac.len() == 1 {
            cents *= 10;
        }
        let magnitude = whole
            .checked_mul(100)
            .and_then(|w| w.checked_add(cents))
            .ok_or_else(bad)?;
        Ok(Money(if negative { -magnitude } else { magnitude }))
    }
}

/// Currency a report is displayed in. Amounts are always kept in MKD.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Currency {
    Mkd,
    Eur,
}

/// Directionality of a provisioned service.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DuplexMode {
    /// Both directions, each fully provisioned.
    Full,
    /// Both directions sharing one channel.
    Half,
    /// One direction only.
    Simplex,
}

/// Monthly leased-line prices on a capacity-by-distance grid. Prices grow
/// (weakly) with both capacity and distance; validated on construction.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceSchedule {
    capacities: Vec<Capacity>,
    distance_bounds_km: Vec<f64>,
    /// `prices[capacity index][distance index]`, per month.
    prices: Vec<Vec<Money>>,
}

/// How to price a link longer than the last distance tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlengthPolicy {
    /// Use the last tier's price; callers surface a warning.
    Clamp,
    Error,
}

impl PriceSchedule {
    pub fn new(
        capacities: Vec<Capacity>,
        distance_bounds_km: Vec<f64>,
        prices: Vec<Vec<Money>>,
    ) -> Result<Self, CostingError> {
        let invalid = |msg: String| Err(CostingError::InvalidSchedule(msg));
        if capacities.is_empty() || distance_bounds_km.is_empty() {
            return invalid("schedule needs at least one capacity and one distance tier".into());
        }
        if !capacities.windows(2).all(|w| w[0] < w[1]) {
            return invalid("capacities must be strictly ascending".into());
        }
        if !distance_bounds_km
            .iter()
            .all(|b| b.is_finite() && *b > 0.0)
            || !distance_bounds_km.windows(2).all(|w| w[0] < w[1])
        {
            return invalid("distance bounds must be positive and strictly ascending".into());
        }
        if prices.len() != capacities.len()
            || prices.iter().any(|row| row.len() != distance_bounds_km.len())
        {
            return invalid("price grid shape must match capacities x distance tiers".into());
        }
        for (ci, row) in prices.iter().enumerate() {
            for (di, p) in row.iter().enumerate() {
                if !p.is_positive() {
                    return invalid(format!(
                        "price for {} within {} km must be positive",
                        capacities[ci], distance_bounds_km[di]
                    ));
                }
                if di > 0 && row[di - 1] > *p {
                    return invalid(format!(
                        "price for {} decreases at the {} km tier",
                        capacities[ci], distance_bounds_km[di]
                    ));
                }
                if ci > 0 && prices[ci - 1][di] > *p {
                    return invalid(format!(
                        "price within {} km decreases at capacity {}",
                        distance_bounds_km[di], capacities[ci]
                    ));
                }
            }
        }
        Ok(PriceSchedule {
            capacities,
            distance_bounds_km,
            prices,
        })
    }

    /// Capacity ladder, ascending.
    pub fn capacities(&self) -> &[Capacity] {
        &self.capacities
    }

    /// Upper bounds of the distance tiers, ascending, inclusive.
    pub fn distance_bounds_km(&self) -> &[f64] {
        &self.distance_bounds_km
    }

    pub fn max_distance_km(&self) -> f64 {
        *self.distance_bounds_km.last().unwrap()
    }

    /// Raw grid cell by indexes; used by serialization.
    pub fn price_at(&self, capacity_index: usize, distance_index: usize) -> Money {
        self.prices[capacity_index][distance_index]
    }

    /// Monthly price for one line of `capacity` spanning `length_km`: the
    /// first distance tier whose (inclusive) bound fits the length.
    pub fn leased_price(
        &self,
        capacity: Capacity,
        length_km: f64,
        policy: OverlengthPolicy,
    ) -> Result<Money, CostingError> {
        let ci = self
            .capacities
            .iter()
            .position(|c| *c == capacity)
            .ok_or(CostingError::UnknownCapacity(capacity))?;
        if !(length_km.is_finite() && length_km >= 0.0) {
            return Err(CostingError::InvalidLength(length_km));
        }
        for (di, bound) in self.distance_bounds_km.iter().enumerate() {
            if length_km <= *bound {
                return Ok(self.prices[ci][di]);
            }
        }
        match policy {
            OverlengthPolicy::Clamp => Ok(*self.prices[ci].last().unwrap()),
            OverlengthPolicy::Error => Err(CostingError::OverMaxDistance {
                length_km,
                max_km: self.max_distance_km(),
            }),
        }
    }
}

impl Default for PriceSchedule {
    /// The published Macedonian leased-line grid: 64 kbit/s to 155 Mbit/s
    /// over distance tiers of 2, 5, 15 and 50 km, in MKD per month.
    fn default() -> Self {
        let mkd = |v: i64| Money::from_mkd(v);
        PriceSchedule::new(
            vec![
                Capacity(64_000),
                Capacity(2_000_000),
                Capacity(34_000_000),
                Capacity(155_000_000),
            ],
            vec![2.0, 5.0, 15.0, 50.0],
            vec![
                vec![mkd(3_733), mkd(4_774), mkd(5_018), mkd(6_059)],
                vec![mkd(11_383), mkd(15_178), mkd(20_380), mkd(32_987)],
                vec![mkd(54_590), mkd(58_936), mkd(97_736), mkd(155_387)],
                vec![mkd(73_807), mkd(81_518), mkd(121_849), mkd(253_613)],
            ],
        )
        .expect("built-in schedule is valid")
    }
}

/// ADSL tariff components.
#[derive(Clone, Copy, Debug)]
pub struct AccessTariff {
    /// One-time access (connection) charge.
    pub acc: Money,
    /// Monthly subscription for the access line.
    pub suba: Money,
    /// One-time service initiation charge.
    pub init: Money,
    /// Monthly subscription for the network service.
    pub subn: Money,
}

/// ATM tariff components: two network accesses plus the virtual circuit.
#[derive(Clone, Copy, Debug)]
pub struct AtmTariff {
    /// Installation for the A-side network access.
    pub ins_a: Money,
    /// Monthly subscription for the A-side network access.
    pub sub_a: Money,
    /// Installation for the B-side network access.
    pub ins_b: Money,
    /// Monthly subscription for the B-side network access.
    pub sub_b: Money,
    /// Installation for the permanent virtual circuit.
    pub ins_pvc: Money,
    /// Monthly subscription for the permanent virtual circuit.
    pub sub_pvc: Money,
}

/// First-year cost of an ADSL connection pair.
///
/// Full duplex provisions both ends (two access and two initiation charges,
/// both monthly streams all year). Half duplex keeps one access line; simplex
/// additionally halves the subscription periods to one semester.
pub fn adsl_annual_cost(mode: DuplexMode, t: &AccessTariff) -> Money {
    match mode {
        DuplexMode::Full => t.acc * 2 + t.suba * 24 + t.init * 2 + t.subn * 24,
        DuplexMode::Half => t.acc + t.suba * 24 + t.init * 2 + t.subn * 12,
        DuplexMode::Simplex => t.acc + t.suba * 12 + t.init + t.subn * 12,
    }
}

/// First-year cost of a rented (leased) line: initiation plus a year of
/// subscription, doubled for full duplex.
pub fn rented_line_annual_cost(mode: DuplexMode, init: Money, sub: Money) -> Money {
    let one_way = init + sub * 12;
    match mode {
        DuplexMode::Full => one_way * 2,
        DuplexMode::Half | DuplexMode::Simplex => one_way,
    }
}

/// ATM cost split into its billed parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtmCost {
    /// Network access on the A side: installation plus a year of subscription.
    pub na_a: Money,
    /// Network access on the B side; not billed for simplex.
    pub na_b: Option<Money>,
    /// Permanent virtual circuit, doubled for full duplex.
    pub pvcc: Money,
    pub total: Money,
}

/// First-year cost of an ATM connection.
pub fn atm_annual_cost(mode: DuplexMode, t: &AtmTariff) -> AtmCost {
    let na_a = t.ins_a + t.sub_a * 12;
    let na_b = t.ins_b + t.sub_b * 12;
    let one_pvc = t.ins_pvc + t.sub_pvc * 12;
    let pvcc = match mode {
        DuplexMode::Full => one_pvc * 2,
        DuplexMode::Half | DuplexMode::Simplex => one_pvc,
    };
    match mode {
        DuplexMode::Full | DuplexMode::Half => AtmCost {
            na_a,
            na_b: Some(na_b),
            pvcc,
            total: na_a + na_b + pvcc,
        },
        DuplexMode::Simplex => AtmCost {
            na_a,
            na_b: None,
            pvcc,
            total: na_a + pvcc,
        },
    }
}

/// One priced link of the network.
#[derive(Clone, Debug)]
pub struct CostItem {
    pub label: String,
    pub a: CityId,
    pub b: CityId,
    pub tier: Capacity,
    pub line_count: u32,
    pub monthly: Money,
    pub annual: Money,
}

/// Priced network: per-link line items plus totals.
#[derive(Clone, Debug)]
pub struct CostQuote {
    pub items: Vec<CostItem>,
    pub monthly_total: Money,
    pub annual_total: Money,
    /// Links priced outside the tariff grid under the clamp policy.
    pub warnings: Vec<String>,
}

/// Prices every sized link against the schedule. Item order follows the
/// input order; `names` supplies display labels per city id.
pub fn network_cost(
    sizings: &[LinkSizing],
    names: &BTreeMap<CityId, String>,
    schedule: &PriceSchedule,
    policy: OverlengthPolicy,
) -> Result<CostQuote, CostingError> {
    let mut items = Vec::with_capacity(sizings.len());
    let mut warnings = Vec::new();
    let mut monthly_total = Money::default();
    let name = |id: CityId| {
        names
            .get(&id)
            .cloned()
            .unwrap_or_else(|| format!("city {id}"))
    };
    for s in sizings {
        let label = format!("{}-{}", name(s.edge.a), name(s.edge.b));
        let price = schedule.leased_price(s.tier, s.edge.length_km, policy)?;
        if s.edge.length_km > schedule.max_distance_km() {
            warnings.push(format!(
                "link {} is {} km, beyond the {} km tariff grid; priced at the top distance tier",
                label,
                s.edge.length_km,
                schedule.max_distance_km()
            ));
        }
        let monthly = price * i64::from(s.line_count);
        monthly_total += monthly;
        items.push(CostItem {
            label,
            a: s.edge.a,
            b: s.edge.b,
            tier: s.tier,
            line_count: s.line_count,
            monthly,
            annual: monthly * 12,
        });
    }
    Ok(CostQuote {
        items,
        monthly_total,
        annual_total: monthly_total * 12,
        warnings,
    })
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CostingError {
    #[error("capacity {0} is not in the price schedule")]
    UnknownCapacity(Capacity),
    #[error("invalid link length {0} km")]
    InvalidLength(f64),
    #[error("link length {length_km} km exceeds the {max_km} km tariff grid")]
    OverMaxDistance { length_km: f64, max_km: f64 },
    #[error("invalid price schedule: {0}")]
    InvalidSchedule(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::routing::Edge;

    fn mkd(v: i64) -> Money {
        Money::from_mkd(v)
    }

    #[test]
    fn money_parses_and_displays_denar_amounts() {
        assert_eq!("3733".parse::<Money>().unwrap(), mkd(3_733));
        assert_eq!("3733.00".parse::<Money>().unwrap(), mkd(3_733));
        assert_eq!("10.5".parse::<Money>().unwrap(), Money::from_hundredths(1_050));
        assert_eq!("0.07".parse::<Money>().unwrap(), Money::from_hundredths(7));
        assert!("12.345".parse::<Money>().is_err());
        assert!("".parse::<Money>().is_err());
        assert!("1,5".parse::<Money>().is_err());
        assert_eq!(mkd(3_733).to_string(), "3733.00");
        assert_eq!(Money::from_hundredths(-1_050).to_string(), "-10.50");
    }

    #[test]
    fn money_rounds_half_away_from_zero() {
        assert_eq!(Money::from_hundredths(149).mkd_rounded(), 1);
        assert_eq!(Money::from_hundredths(150).mkd_rounded(), 2);
        assert_eq!(Money::from_hundredths(-150).mkd_rounded(), -2);
        assert_eq!(mkd(4_571_951).eur(), 4_571_951.0 / 61.0);
    }

    #[test]
    fn published_grid_prices_are_looked_up_by_capacity_and_distance() {
        let s = PriceSchedule::default();
        let p = |cap: u64, km: f64| {
            s.leased_price(Capacity(cap), km, OverlengthPolicy::Error)
                .unwrap()
        };
        assert_eq!(p(64_000, 2.0), mkd(3_733));
        assert_eq!(p(2_000_000, 3.0), mkd(15_178));
        assert_eq!(p(155_000_000, 50.0), mkd(253_613));
        assert_eq!(p(34_000_000, 15.0), mkd(97_736));
        // A 30 km span falls in the 50 km tier.
        assert_eq!(p(155_000_000, 30.0), mkd(253_613));
    }

    #[test]
    fn boundary_lengths_stay_in_their_own_tier() {
        let s = PriceSchedule::default();
        for (km, want) in [(2.0, 3_733), (5.0, 4_774), (15.0, 5_018), (50.0, 6_059)] {
            assert_eq!(
                s.leased_price(Capacity(64_000), km, OverlengthPolicy::Error)
                    .unwrap(),
                mkd(want)
            );
        }
    }

    #[test]
    fn overlength_links_follow_the_policy() {
        let s = PriceSchedule::default();
        assert_eq!(
            s.leased_price(Capacity(64_000), 52.0, OverlengthPolicy::Clamp)
                .unwrap(),
            mkd(6_059)
        );
        assert_eq!(
            s.leased_price(Capacity(64_000), 52.0, OverlengthPolicy::Error)
                .unwrap_err(),
            CostingError::OverMaxDistance {
                length_km: 52.0,
                max_km: 50.0
            }
        );
    }

    #[test]
    fn unknown_capacity_and_bad_lengths_are_rejected() {
        let s = PriceSchedule::default();
        assert_eq!(
            s.leased_price(Capacity(1_000_000), 10.0, OverlengthPolicy::Clamp)
                .unwrap_err(),
            CostingError::UnknownCapacity(Capacity(1_000_000))
        );
        assert!(matches!(
            s.leased_price(Capacity(64_000), f64::NAN, OverlengthPolicy::Clamp),
            Err(CostingError::InvalidLength(_))
        ));
    }

    #[test]
    fn schedule_validation_rejects_non_monotone_grids() {
        let caps = vec![Capacity(64_000), Capacity(2_000_000)];
        let bounds = vec![2.0, 5.0];
        let ok = PriceSchedule::new(
            caps.clone(),
            bounds.clone(),
            vec![vec![mkd(10), mkd(20)], vec![mkd(30), mkd(40)]],
        );
        assert!(ok.is_ok());
        let decreasing_distance = PriceSchedule::new(
            caps.clone(),
            bounds.clone(),
            vec![vec![mkd(20), mkd(10)], vec![mkd(30), mkd(40)]],
        );
        assert!(decreasing_distance.is_err());
        let decreasing_capacity = PriceSchedule::new(
            caps.clone(),
            bounds.clone(),
            vec![vec![mkd(10), mkd(20)], vec![mkd(5), mkd(40)]],
        );
        assert!(decreasing_capacity.is_err());
        let ragged = PriceSchedule::new(caps, bounds, vec![vec![mkd(10)], vec![mkd(5), mkd(40)]]);
        assert!(ragged.is_err());
    }

    #[test]
    fn adsl_costs_match_the_closed_form() {
        let t = AccessTariff {
            acc: mkd(100),
            suba: mkd(10),
            init: mkd(50),
            subn: mkd(20),
        };
        assert_eq!(adsl_annual_cost(DuplexMode::Full, &t), mkd(1_020));
        assert_eq!(adsl_annual_cost(DuplexMode::Half, &t), mkd(680));
        assert_eq!(adsl_annual_cost(DuplexMode::Simplex, &t), mkd(510));
    }

    #[test]
    fn rented_line_costs_match_the_closed_form() {
        assert_eq!(
            rented_line_annual_cost(DuplexMode::Full, mkd(50), mkd(20)),
            mkd(580)
        );
        assert_eq!(
            rented_line_annual_cost(DuplexMode::Half, mkd(50), mkd(20)),
            mkd(290)
        );
        assert_eq!(
            rented_line_annual_cost(DuplexMode::Simplex, mkd(50), mkd(20)),
            mkd(290)
        );
    }

    #[test]
    fn atm_costs_break_down_into_accesses_and_circuit() {
        let t = AtmTariff {
            ins_a: mkd(10),
            sub_a: mkd(5),
            ins_b: mkd(20),
            sub_b: mkd(5),
            ins_pvc: mkd(30),
            sub_pvc: mkd(8),
        };
        let full = atm_annual_cost(DuplexMode::Full, &t);
        assert_eq!(full.na_a, mkd(70));
        assert_eq!(full.na_b, Some(mkd(80)));
        assert_eq!(full.pvcc, mkd(252));
        assert_eq!(full.total, mkd(402));
        let half = atm_annual_cost(DuplexMode::Half, &t);
        assert_eq!(half.pvcc, mkd(126));
        assert_eq!(half.total, mkd(276));
        let simplex = atm_annual_cost(DuplexMode::Simplex, &t);
        assert_eq!(simplex.na_b, None);
        assert_eq!(simplex.total, mkd(196));
        // Upgrading half to full adds exactly one more circuit.
        assert_eq!(full.total - half.total, mkd(30) + mkd(8) * 12);
    }

    #[test]
    fn network_cost_prices_each_line_and_sums() {
        let names: BTreeMap<CityId, String> = [
            (CityId(1), "Alpha".to_string()),
            (CityId(2), "Beta".to_string()),
        ]
        .into();
        let sizing = LinkSizing {
            edge: Edge::new(CityId(1), CityId(2), 30.0),
            erlangs: 900.0,
            bandwidth_bps: 57_600_000.0,
            tier: Capacity(155_000_000),
            line_count: 1,
        };
        let quote = network_cost(
            &[sizing],
            &names,
            &PriceSchedule::default(),
            OverlengthPolicy::Clamp,
        )
        .unwrap();
        assert_eq!(quote.items.len(), 1);
        assert_eq!(quote.items[0].label, "Alpha-Beta");
        assert_eq!(quote.items[0].monthly, mkd(253_613));
        assert_eq!(quote.items[0].annual, mkd(253_613 * 12));
        assert_eq!(quote.monthly_total, mkd(253_613));
        assert_eq!(quote.annual_total, mkd(253_613 * 12));
        assert!(quote.warnings.is_empty());
    }

    #[test]
    fn network_cost_flags_clamped_links_and_multiplies_lines() {
        let names = BTreeMap::new();
        let sizing = LinkSizing {
            edge: Edge::new(CityId(1), CityId(2), 52.0),
            erlangs: 10_000.0,
            bandwidth_bps: 640_000_000.0,
            tier: Capacity(155_000_000),
            line_count: 5,
        };
        let quote = network_cost(
            &[sizing.clone()],
            &names,
            &PriceSchedule::default(),
            OverlengthPolicy::Clamp,
        )
        .unwrap();
        assert_eq!(quote.monthly_total, mkd(253_613 * 5));
        assert_eq!(quote.warnings.len(), 1);
        assert!(quote.warnings[0].contains("52 km"));
        assert_eq!(
            network_cost(
                &[sizing],
                &names,
                &PriceSchedule::default(),
                OverlengthPolicy::Error
            )
            .unwrap_err(),
            CostingError::OverMaxDistance {
                length_km: 52.0,
                max_km: 50.0
            }
        );
    }

    #[test]
    fn empty_network_costs_nothing() {
        let quote = network_cost(
            &[],
            &BTreeMap::new(),
            &PriceSchedule::default(),
            OverlengthPolicy::Clamp,
        )
        .unwrap();
        assert!(quote.items.is_empty());
        assert_eq!(quote.monthly_total, Money::default());
        assert_eq!(quote.annual_total, Money::default());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_money() -> impl Strategy<Value = Money> {
            (0i64..10_000_000).prop_map(Money::from_hundredths)
        }

        proptest! {
            #[test]
            fn adsl_ordering_and_linearity(
                acc in arb_money(), suba in arb_money(),
                init in arb_money(), subn in arb_money(),
                k in 0i64..20,
            ) {
                let t = AccessTariff { acc, suba, init, subn };
                let full = adsl_annual_cost(DuplexMode::Full, &t);
                let half = adsl_annual_cost(DuplexMode::Half, &t);
                let simplex = adsl_annual_cost(DuplexMode::Simplex, &t);
                prop_assert!(full >= half);
                prop_assert!(half >= simplex);
                let scaled = AccessTariff {
                    acc: acc * k, suba: suba * k, init: init * k, subn: subn * k,
                };
                prop_assert_eq!(adsl_annual_cost(DuplexMode::Full, &scaled), full * k);
            }

            #[test]
            fn rented_ordering_and_linearity(
                init in arb_money(), sub in arb_money(), k in 0i64..20,
            ) {
                let full = rented_line_annual_cost(DuplexMode::Full, init, sub);
                let half = rented_line_annual_cost(DuplexMode::Half, init, sub);
                let simplex = rented_line_annual_cost(DuplexMode::Simplex, init, sub);
                prop_assert!(full >= half);
                prop_assert_eq!(half, simplex);
                prop_assert_eq!(
                    rented_line_annual_cost(DuplexMode::Full, init * k, sub * k),
                    full * k
                );
            }

            #[test]
            fn atm_ordering_and_circuit_difference(
                ins_a in arb_money(), sub_a in arb_money(),
                ins_b in arb_money(), sub_b in arb_money(),
                ins_pvc in arb_money(), sub_pvc in arb_money(),
            ) {
                let t = AtmTariff { ins_a, sub_a, ins_b, sub_b, ins_pvc, sub_pvc };
                let full = atm_annual_cost(DuplexMode::Full, &t);
                let half = atm_annual_cost(DuplexMode::Half, &t);
                let simplex = atm_annual_cost(DuplexMode::Simplex, &t);
                prop_assert!(full.total >= half.total);
                prop_assert!(half.total >= simplex.total);
                // Full vs half differ by exactly one more virtual circuit.
                prop_assert_eq!(full.total - half.total, ins_pvc + sub_pvc * 12);
            }
        }
    }
}
