use std::fmt;
use std::str::FromStr;

use crate::bounds::GapMeasure;
use crate::clock::ClockMode;
use crate::error::{Error, Result};
use crate::lp::FrontierOptions;
use crate::model::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeSelection {
    DepthFirst,
    BreadthFirst,
    Lhg,
    Hsz,
}

impl NodeSelection {
    /// Gap measure driving the queue, if any.
    pub fn gap_measure(self) -> Option<GapMeasure> {
        match self {
            NodeSelection::Lhg => Some(GapMeasure::Lhg),
            NodeSelection::Hsz => Some(GapMeasure::Hsz),
            _ => None,
        }
    }

    pub fn from_measure(m: GapMeasure) -> Self {
        match m {
            GapMeasure::Lhg => NodeSelection::Lhg,
            GapMeasure::Hsz => NodeSelection::Hsz,
        }
    }
}

impl FromStr for NodeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "depth" | "dfs" => Ok(NodeSelection::DepthFirst),
            "breadth" | "bfs" => Ok(NodeSelection::BreadthFirst),
            "lhg" => Ok(NodeSelection::Lhg),
            "hsz" => Ok(NodeSelection::Hsz),
            other => Err(Error::InvalidConfig(format!("unknown node selection `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    MostOftenFractional,
    SumOfRatios,
}

impl FromStr for Branching {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mof" => Ok(Branching::MostOftenFractional),
            "sor" => Ok(Branching::SumOfRatios),
            other => Err(Error::InvalidConfig(format!("unknown branching rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub node_selection: NodeSelection,
    pub branching: Branching,
    pub warmstart: bool,
    pub ec_enabled: bool,
    /// Objective minimized in stage one of the ε-constraint step.
    pub ec_objective: usize,
    pub slb_enabled: bool,
    pub slb_level: usize,
    pub te_enabled: bool,
    pub te_threshold: usize,
    /// Seconds; `None` for no limit.
    pub time_limit: Option<f64>,
    pub node_limit: Option<usize>,
    pub clock: ClockMode,
    pub frontier: FrontierOptions,
    pub big_m: Option<i64>,
    /// Prune lubs whose closed integer box misses the bound set.
    pub integral_strengthening: bool,
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_selection: NodeSelection::DepthFirst,
            branching: Branching::MostOftenFractional,
            warmstart: false,
            ec_enabled: false,
            ec_objective: 0,
            slb_enabled: false,
            slb_level: 5,
            te_enabled: false,
            te_threshold: 10,
            time_limit: Some(7200.0),
            node_limit: None,
            clock: ClockMode::Wall,
            frontier: FrontierOptions::default(),
            big_m: None,
            integral_strengthening: false,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, p: usize) -> Result<()> {
        if self.te_threshold > DEFAULT_ENUMERATION_CAP {
            return Err(Error::InvalidConfig(format!(
                "te_threshold {} exceeds the enumeration cap {DEFAULT_ENUMERATION_CAP}",
                self.te_threshold
            )));
        }
        if self.slb_level == 0 {
            return Err(Error::InvalidConfig("slb_level must be at least 1".into()));
        }
        if self.ec_objective >= p {
            return Err(Error::InvalidConfig(format!(
                "ec_objective {} out of range for {p} objectives",
                self.ec_objective
            )));
        }
        if let Some(t) = self.time_limit {
            if t.is_nan() || t < 0.0 {
                return Err(Error::InvalidConfig("time limit must be nonnegative".into()));
            }
        }
        if self.frontier.facet_tol.is_nan() || self.frontier.facet_tol <= 0.0 {
            return Err(Error::InvalidConfig("facet tolerance must be positive".into()));
        }
        Ok(())
    }
}

/// Gap measure used for a problem family when an approach needs one but
/// none is given: the local hypervolume gap for knapsacks, the search-zone
/// box elsewhere.
pub fn default_measure(problem: &str) -> GapMeasure {
    if problem.eq_ignore_ascii_case("kp") {
        GapMeasure::Lhg
    } else {
        GapMeasure::Hsz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ApproachBase {
    Bb,
    NsLhg,
    NsHsz,
    Wst,
    Ec,
    Slb,
}

/// A named configuration from the experiment matrix, optionally with
/// terminal enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Approach {
    pub base: ApproachBase,
    pub te: bool,
}

impl Approach {
    pub const fn new(base: ApproachBase, te: bool) -> Self {
        Approach { base, te }
    }

    /// The seven configurations of the oracle-equivalence matrix.
    pub fn matrix() -> Vec<Approach> {
        use ApproachBase::*;
        vec![
            Approach::new(Bb, false),
            Approach::new(NsLhg, false),
            Approach::new(NsHsz, false),
            Approach::new(Wst, false),
            Approach::new(Ec, false),
            Approach::new(Slb, false),
            Approach::new(Slb, true),
        ]
    }

    pub fn label(&self) -> String {
        let base = match self.base {
            ApproachBase::Bb => "BB",
            ApproachBase::NsLhg => "NS(LHG)",
            ApproachBase::NsHsz => "NS(HSZ)",
            ApproachBase::Wst => "WST",
            ApproachBase::Ec => "EC",
            ApproachBase::Slb => "SLB",
        };
        if self.te {
            format!("{base}+TE")
        } else {
            base.to_string()
        }
    }

    /// Configuration for this approach. `measure` is the gap measure for
    /// the approaches built on NS(.) without naming one.
    pub fn config(&self, measure: GapMeasure) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        let ns = |cfg: &mut SolverConfig, m| cfg.node_selection = NodeSelection::from_measure(m);
        match self.base {
            ApproachBase::Bb => {}
            ApproachBase::NsLhg => ns(&mut cfg, GapMeasure::Lhg),
            ApproachBase::NsHsz => ns(&mut cfg, GapMeasure::Hsz),
            ApproachBase::Wst | ApproachBase::Ec | ApproachBase::Slb => {
                ns(&mut cfg, measure);
                cfg.warmstart = true;
                cfg.ec_enabled = self.base != ApproachBase::Wst;
                cfg.slb_enabled = self.base == ApproachBase::Slb;
            }
        }
        cfg.te_enabled = self.te;
        cfg
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Approach {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        let (head, te) = match upper.strip_suffix("+TE") {
            Some(h) => (h, true),
            None => (upper.as_str(), false),
        };
        let base = match head {
            "BB" => ApproachBase::Bb,
            "NS(LHG)" | "NS-LHG" | "NSLHG" => ApproachBase::NsLhg,
            "NS(HSZ)" | "NS-HSZ" | "NSHSZ" => ApproachBase::NsHsz,
            "WST" => ApproachBase::Wst,
            "EC" => ApproachBase::Ec,
            "SLB" => ApproachBase::Slb,
            _ => return Err(Error::InvalidConfig(format!("unknown approach `{s}`"))),
        };
        Ok(Approach { base, te })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for a in Approach::matrix() {
            assert_eq!(a.label().parse::<Approach>().unwrap(), a);
        }
        assert_eq!("ec+te".parse::<Approach>().unwrap().label(), "EC+TE");
        assert!("XYZ".parse::<Approach>().is_err());
    }

    #[test]
    fn presets_are_cumulative() {
        let slb = Approach::new(ApproachBase::Slb, true).config(GapMeasure::Hsz);
        assert!(slb.warmstart && slb.ec_enabled && slb.slb_enabled && slb.te_enabled);
        assert_eq!(slb.node_selection, NodeSelection::Hsz);
        let wst = Approach::new(ApproachBase::Wst, false).config(GapMeasure::Lhg);
        assert!(wst.warmstart && !wst.ec_enabled && !wst.slb_enabled);
        let bb = Approach::new(ApproachBase::Bb, false).config(GapMeasure::Lhg);
        assert_eq!(bb.node_selection, NodeSelection::DepthFirst);
        assert_eq!(bb.branching, Branching::MostOftenFractional);
    }

    #[test]
    fn validation() {
        let cfg = SolverConfig {
            te_threshold: 26,
            ..SolverConfig::default()
        };
        assert!(cfg.validate(2).is_err());
        let cfg = SolverConfig {
            slb_level: 0,
            ..SolverConfig::default()
        };
        assert!(cfg.validate(2).is_err());
        assert!(SolverConfig::default().validate(2).is_ok());
    }

    #[test]
    fn family_default_measure() {
        assert_eq!(default_measure("KP"), GapMeasure::Lhg);
        assert_eq!(default_measure("GAP"), GapMeasure::Hsz);
    }
}
