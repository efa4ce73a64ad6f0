use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::{Error, Result};

/// Channel of every user. A D2D user with `None` is not served.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChannelAllocation {
    pub cellular_channel: Vec<usize>,
    pub d2d_channel: Vec<Option<usize>>,
}

impl ChannelAllocation {
    pub fn new(cellular_channel: Vec<usize>, d2d_channel: Vec<usize>) -> Self {
        Self { cellular_channel, d2d_channel: d2d_channel.into_iter().map(Some).collect() }
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.cellular_channel.len() != scenario.cellular_count() {
            return Err(Error::IncompleteAllocation(format!(
                "{} cellular entries for {} cellular users",
                self.cellular_channel.len(),
                scenario.cellular_count()
            )));
        }
        if self.d2d_channel.len() != scenario.d2d_count() {
            return Err(Error::IncompleteAllocation(format!(
                "{} D2D entries for {} D2D users",
                self.d2d_channel.len(),
                scenario.d2d_count()
            )));
        }
        let q = scenario.num_channels;
        let bad = self
            .cellular_channel
            .iter()
            .copied()
            .chain(self.d2d_channel.iter().flatten().copied())
            .find(|&c| c >= q);
        if let Some(c) = bad {
            return Err(Error::IncompleteAllocation(format!("channel {c} out of range (Q = {q})")));
        }
        Ok(())
    }

    pub fn is_complete(&self) -> bool {
        self.d2d_channel.iter().all(Option::is_some)
    }

    pub fn cellular_on(&self, q: usize) -> Vec<usize> {
        (0..self.cellular_channel.len()).filter(|&l| self.cellular_channel[l] == q).collect()
    }

    pub fn d2d_on(&self, q: usize) -> Vec<usize> {
        (0..self.d2d_channel.len()).filter(|&k| self.d2d_channel[k] == Some(q)).collect()
    }

    /// Every channel carries exactly one cellular user.
    pub fn one_cellular_per_channel(&self, channels: usize) -> bool {
        (0..channels).all(|q| self.cellular_on(q).len() == 1)
    }
}

/// Per-user utilities for one allocation and power profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityBreakdown {
    pub cellular: Vec<f64>,
    pub d2d: Vec<Option<f64>>,
}

impl UtilityBreakdown {
    pub fn cellular_sum(&self) -> f64 {
        self.cellular.iter().sum()
    }

    pub fn d2d_sum(&self) -> f64 {
        self.d2d.iter().flatten().sum()
    }

    pub fn total(&self) -> f64 {
        self.cellular_sum() + self.d2d_sum()
    }
}

impl Scenario {
    /// Cellular utility `ln(p_c h_bl,q / (1 + sum_k p_k h_kl,q))` with the
    /// D2D `sharers` given as `(user, power)`.
    pub fn cellular_utility(&self, l: usize, q: usize, sharers: &[(usize, f64)]) -> Result<f64> {
        let interference: f64 = sharers.iter().map(|&(k, p)| p * self.d2d_to_cellular(k, l, q)).sum();
        let ratio = self.power.bs_power * self.bs_to_cellular(l, q) / (1.0 + interference);
        checked_ln(ratio, || self.cellular[l].id.clone())
    }

    /// D2D utility `ln(p_k h_kk',q / (1 + sum_{j != k} p_j h_jk',q + p_c h_bk',q)) - c_k p_k`.
    ///
    /// `cluster` lists every D2D user on channel `q` with its power and must
    /// contain `k`.
    pub fn d2d_utility(&self, k: usize, q: usize, cluster: &[(usize, f64)], price: f64) -> Result<f64> {
        let own = cluster
            .iter()
            .find(|&&(j, _)| j == k)
            .map(|&(_, p)| p)
            .ok_or_else(|| Error::IncompleteAllocation(format!("D2D user {k} missing from its cluster")))?;
        let interference: f64 = cluster
            .iter()
            .filter(|&&(j, _)| j != k)
            .map(|&(j, p)| p * self.d2d_to_d2d(j, k, q))
            .sum();
        let denom = 1.0 + interference + self.power.bs_power * self.bs_to_d2d_rx(k, q);
        let rate = checked_ln(own * self.d2d_to_d2d(k, k, q) / denom, || self.d2d[k].id.clone())?;
        Ok(rate - price * own)
    }

    /// Price `c_k` for D2D user `k` sharing a channel with cellular user `l`.
    pub fn d2d_price(&self, k: usize, l: Option<usize>) -> Result<f64> {
        match (self.power.price, l) {
            (super::Price::Scalar(c), _) => Ok(c),
            (price, Some(l)) => Ok(price.for_user(self.d2d_to_cellular_pathloss(k, l))),
            (_, None) => Err(Error::IncompleteAllocation(format!(
                "proportional price for {} needs a cellular user on its channel",
                self.d2d[k].id
            ))),
        }
    }
}

fn checked_ln(x: f64, who: impl FnOnce() -> String) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x.ln())
    } else {
        Err(Error::NonPositiveLog(who()))
    }
}

fn breakdown(scenario: &Scenario, alloc: &ChannelAllocation, powers: &[f64]) -> Result<UtilityBreakdown> {
    alloc.validate(scenario)?;
    if powers.len() != scenario.d2d_count() {
        return Err(Error::IncompleteAllocation(format!(
            "{} powers for {} D2D users",
            powers.len(),
            scenario.d2d_count()
        )));
    }
    let mut cellular = vec![0.0; scenario.cellular_count()];
    let mut d2d = vec![None; scenario.d2d_count()];
    for q in 0..scenario.num_channels {
        let cluster: Vec<(usize, f64)> = alloc.d2d_on(q).into_iter().map(|k| (k, powers[k])).collect();
        let cell = alloc.cellular_on(q);
        for &l in &cell {
            cellular[l] = scenario.cellular_utility(l, q, &cluster)?;
        }
        for &(k, _) in &cluster {
            let price = scenario.d2d_price(k, cell.first().copied())?;
            d2d[k] = Some(scenario.d2d_utility(k, q, &cluster, price)?);
        }
    }
    Ok(UtilityBreakdown { cellular, d2d })
}

/// Network aggregate utility; every D2D user must be assigned a channel.
pub fn aggregate_utility(
    scenario: &Scenario,
    alloc: &ChannelAllocation,
    powers: &[f64],
) -> Result<UtilityBreakdown> {
    if let Some(k) = alloc.d2d_channel.iter().position(Option::is_none) {
        return Err(Error::IncompleteAllocation(format!("D2D user {} has no channel", k + 1)));
    }
    breakdown(scenario, alloc, powers)
}

/// Like [`aggregate_utility`] but unserved D2D users are silent and score nothing.
pub fn served_utility(
    scenario: &Scenario,
    alloc: &ChannelAllocation,
    powers: &[f64],
) -> Result<UtilityBreakdown> {
    breakdown(scenario, alloc, powers)
}

/// Power- and fading-independent lower bound on the cellular utility sum:
/// `sum_l ln(p_c h_bl,q) - sum_l sum_{k on q} p_d^(M) g_kl`.
pub fn cellular_lower_bound(scenario: &Scenario, alloc: &ChannelAllocation) -> Result<f64> {
    alloc.validate(scenario)?;
    let top = scenario.power.max_level();
    let mut bound = 0.0;
    for (l, &q) in alloc.cellular_channel.iter().enumerate() {
        bound += checked_ln(scenario.power.bs_power * scenario.bs_to_cellular(l, q), || {
            scenario.cellular[l].id.clone()
        })?;
        for k in alloc.d2d_on(q) {
            bound -= top * scenario.d2d_to_cellular_pathloss(k, l);
        }
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{ChannelGainTensor, NodeId, Position, PowerConfig, Price, Topology};

    /// One cellular user, `k` D2D users, every gain one; callers pin what they need.
    fn bare(k: usize, bs_power: f64, price: Price) -> Scenario {
        let topo = Topology {
            bs: Position::ORIGIN,
            cellular: vec![Position::new(1.0, 0.0).unwrap()],
            d2d: (0..k)
                .map(|i| {
                    let x = 2.0 + i as f64;
                    (Position::new(x, 1.0).unwrap(), Position::new(x, 2.0).unwrap())
                })
                .collect(),
        };
        let gains = ChannelGainTensor::unit(2 + 2 * k, 1);
        let power = PowerConfig::new(bs_power, vec![2.0, 4.0], price).unwrap();
        Scenario::with_gains(topo, gains, power, 0).unwrap()
    }

    fn set(s: &mut Scenario, u: NodeId, v: NodeId, h: f64) {
        s.gains_mut().override_link(u, v, &[h]).unwrap();
    }

    #[test]
    fn cellular_utility_cases() {
        // p_c h = 1 with no sharers gives ln 1
        let mut s1 = bare(0, 7.0, Price::Scalar(0.0));
        set(&mut s1, NodeId(0), NodeId(1), 1.0 / 7.0);
        assert!(s1.cellular_utility(0, 0, &[]).unwrap().abs() < 1e-15);

        let mut s7 = bare(1, 7.0, Price::Scalar(0.1));
        set(&mut s7, NodeId(0), NodeId(1), 0.46);
        let alone = s7.cellular_utility(0, 0, &[]).unwrap();
        assert!((alone - 1.169_381_36).abs() < 1e-8, "{alone}");
        let tx = s7.tx_node(0);
        set(&mut s7, tx, NodeId(1), 0.5);
        let shared = s7.cellular_utility(0, 0, &[(0, 2.0)]).unwrap();
        assert!((shared - (3.22f64 / 2.0).ln()).abs() < 1e-12);
        assert!((shared - 0.476_234).abs() < 1e-6);
    }

    #[test]
    fn d2d_utility_cases() {
        let mut s = bare(1, 7.0, Price::Scalar(0.0));
        let (tx, rx) = (s.tx_node(0), s.rx_node(0));
        set(&mut s, tx, rx, 1.0);
        // remove the BS term: p_c h_bk' must vanish; smallest gain keeps it negligible
        set(&mut s, NodeId(0), rx, 1e-300);
        let u = s.d2d_utility(0, 0, &[(0, 2.0)], 0.0).unwrap();
        assert!((u - 2f64.ln()).abs() < 1e-12);
        let u = s.d2d_utility(0, 0, &[(0, 2.0)], 0.1).unwrap();
        assert!((u - (2f64.ln() - 0.2)).abs() < 1e-12);
        assert!((u - 0.493_147).abs() < 1e-6);
    }

    #[test]
    fn d2d_utility_with_interference() {
        let mut s = bare(2, 7.0, Price::Scalar(0.1));
        let (tx0, rx0, tx1) = (s.tx_node(0), s.rx_node(0), s.tx_node(1));
        set(&mut s, tx0, rx0, 0.5);
        set(&mut s, tx1, rx0, 0.25);
        set(&mut s, NodeId(0), rx0, 1e-300);
        // 4 * 0.5 / (1 + 4 * 0.25) = 1, minus 0.1 * 4
        let u = s.d2d_utility(0, 0, &[(0, 4.0), (1, 4.0)], 0.1).unwrap();
        assert!((u + 0.4).abs() < 1e-12, "{u}");
        assert!(s.d2d_utility(0, 0, &[(1, 4.0)], 0.1).is_err());
    }

    #[test]
    fn lower_bound_direct_value() {
        let mut s = bare(1, 7.0, Price::Scalar(0.1));
        set(&mut s, NodeId(0), NodeId(1), 0.46);
        let tx = s.tx_node(0);
        s.gains_mut().set_pathloss(tx, NodeId(1), 0.1).unwrap();
        let alloc = ChannelAllocation::new(vec![0], vec![0]);
        let lb = cellular_lower_bound(&s, &alloc).unwrap();
        assert!((lb - (3.22f64.ln() - 0.4)).abs() < 1e-12);
        assert!((lb - 0.769_381).abs() < 1e-6);
        let actual = aggregate_utility(&s, &alloc, &[4.0]).unwrap().cellular_sum();
        assert!(actual > lb);
    }

    #[test]
    fn lower_bound_without_d2d_is_signal_sum() {
        let mut s = bare(0, 7.0, Price::Scalar(0.1));
        set(&mut s, NodeId(0), NodeId(1), 0.46);
        let alloc = ChannelAllocation::new(vec![0], vec![]);
        let lb = cellular_lower_bound(&s, &alloc).unwrap();
        assert_eq!(lb, 3.22f64.ln());
        let agg = aggregate_utility(&s, &alloc, &[]).unwrap();
        assert_eq!(agg.total(), agg.cellular_sum());
    }

    #[test]
    fn incomplete_allocations_rejected() {
        let s = bare(2, 7.0, Price::Scalar(0.1));
        let partial = ChannelAllocation { cellular_channel: vec![0], d2d_channel: vec![Some(0), None] };
        assert!(matches!(
            aggregate_utility(&s, &partial, &[2.0, 2.0]),
            Err(Error::IncompleteAllocation(_))
        ));
        let served = served_utility(&s, &partial, &[2.0, 2.0]).unwrap();
        assert!(served.d2d[1].is_none());
        let out_of_range = ChannelAllocation::new(vec![1], vec![0, 0]);
        assert!(aggregate_utility(&s, &out_of_range, &[2.0, 2.0]).is_err());
        let short = ChannelAllocation::new(vec![0], vec![0]);
        assert!(aggregate_utility(&s, &short, &[2.0]).is_err());
    }

    #[test]
    fn proportional_price_uses_cochannel_cellular_gain() {
        let mut s = bare(1, 7.0, Price::Proportional(0.5));
        let tx = s.tx_node(0);
        s.gains_mut().set_pathloss(tx, NodeId(1), 0.2).unwrap();
        assert!((s.d2d_price(0, Some(0)).unwrap() - 0.1).abs() < 1e-15);
        assert!(s.d2d_price(0, None).is_err());
    }
}
