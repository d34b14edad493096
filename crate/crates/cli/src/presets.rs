use std::fmt;
use std::str::FromStr;

use crate::error::{config, CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    LiftVolume,
    Bm,
    LpBm,
    Pl,
    Bbl,
    Thm15,
    Lemma31,
    Lemma32,
    LpMinkowski,
}

impl Target {
    pub const ALL: [Target; 9] = [
        Target::LiftVolume,
        Target::Bm,
        Target::LpBm,
        Target::Pl,
        Target::Bbl,
        Target::Thm15,
        Target::Lemma31,
        Target::Lemma32,
        Target::LpMinkowski,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::LiftVolume => "lift_volume",
            Target::Bm => "bm",
            Target::LpBm => "lp_bm",
            Target::Pl => "pl",
            Target::Bbl => "bbl",
            Target::Thm15 => "thm15",
            Target::Lemma31 => "lemma31",
            Target::Lemma32 => "lemma32",
            Target::LpMinkowski => "lp_minkowski",
        }
    }

    /// Parameter keys the target reads.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Target::LiftVolume => &["f", "s", "nodes", "samples"],
            Target::Bm => &["k", "l", "lambda", "samples"],
            Target::LpBm => &["k", "l", "p", "lambda_resolution", "samples"],
            Target::Pl => &["f", "g", "h", "lambda", "nodes", "out_nodes"],
            Target::Bbl => &["f", "g", "h", "lambda", "alpha", "nodes", "out_nodes"],
            Target::Thm15 => &["f", "g", "p", "s", "mu", "omega", "nodes", "resolution", "lambda_resolution"],
            Target::Lemma31 => &["f", "g", "m", "s", "condition", "nodes", "out_nodes"],
            Target::Lemma32 => &["f", "g", "m", "s", "nodes", "out_nodes", "samples"],
            Target::LpMinkowski => &[
                "f",
                "f_scale",
                "g",
                "p",
                "s",
                "epsilons",
                "nodes",
                "out_nodes",
                "lambda_resolution",
            ],
        }
    }

    pub fn check_keys<'a>(self, keys: impl Iterator<Item = &'a str>) -> Result<()> {
        for k in keys {
            if !self.keys().contains(&k) {
                return Err(config(format!(
                    "{} does not take parameter {k:?}; it takes {}",
                    self,
                    self.keys().join(", ")
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Target {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Target::ALL.iter().map(|t| t.as_str()).collect();
                config(format!("unknown target {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

pub struct Preset {
    pub name: &'static str,
    pub target: Target,
    pub description: &'static str,
    pub params: &'static [(&'static str, &'static str)],
}

const COROLLARY: [(&str, &str); 7] = [
    ("g", "indicator:0:1"),
    ("p", "2"),
    ("s", "1"),
    ("epsilons", "0.1,0.05,0.025,0.0125"),
    ("nodes", "129"),
    ("out_nodes", "513"),
    ("lambda_resolution", "513"),
];

macro_rules! with_corollary {
    ($($extra:expr),*) => {
        &[$($extra,)* COROLLARY[0], COROLLARY[1], COROLLARY[2], COROLLARY[3], COROLLARY[4], COROLLARY[5], COROLLARY[6]]
    };
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "segment-lp-bm",
        target: Target::LpBm,
        description: "L_p sum of [0,1] and [0,2]; both sides equal 1 + 2^p",
        params: &[("k", "segment:0:1"), ("l", "segment:0:2"), ("p", "2"), ("lambda_resolution", "1000"), ("samples", "10000")],
    },
    Preset {
        name: "segment-bm",
        target: Target::Bm,
        description: "(1/2)[0,1] + (1/2)[0,3] = [0,2]; equality",
        params: &[("k", "segment:0:1"), ("l", "segment:0:3"), ("lambda", "0.5"), ("samples", "10000")],
    },
    Preset {
        name: "square-bm",
        target: Target::Bm,
        description: "unit square and the square of side 2; homothetic, equality",
        params: &[("k", "box:0,0:1,1"), ("l", "box:0,0:2,2"), ("lambda", "0.5"), ("samples", "100000")],
    },
    Preset {
        name: "gaussian-pl",
        target: Target::Pl,
        description: "two standard Gaussians on [-4,4] with the geometric-mean envelope",
        params: &[("f", "gaussian:1:-4:4"), ("g", "gaussian:1:-4:4"), ("lambda", "0.5"), ("nodes", "129")],
    },
    Preset {
        name: "tent-bbl",
        target: Target::Bbl,
        description: "tents centred at 0 and 1 with the alpha = 1/2 mean envelope",
        params: &[("f", "tent:0:1"), ("g", "tent:1:1"), ("lambda", "0.3"), ("alpha", "0.5"), ("nodes", "129")],
    },
    Preset {
        name: "indicator-equal",
        target: Target::Thm15,
        description: "f = g = indicator of [0,1], p = 2, s = 1; equality in the limit",
        params: &[
            ("f", "indicator:0:1"),
            ("g", "indicator:0:1"),
            ("p", "2"),
            ("s", "1"),
            ("mu", "1"),
            ("omega", "1"),
            ("nodes", "65"),
            ("resolution", "65"),
        ],
    },
    Preset {
        name: "indicator-unequal",
        target: Target::Thm15,
        description: "indicators of [0,1] and [0,2], p = 2, s = 1; strict inequality",
        params: &[
            ("f", "indicator:0:1"),
            ("g", "indicator:0:2"),
            ("p", "2"),
            ("s", "1"),
            ("mu", "1"),
            ("omega", "1"),
            ("nodes", "65"),
            ("resolution", "65"),
        ],
    },
    Preset {
        name: "das-gupta",
        target: Target::Thm15,
        description: "p = 1 with mu + omega = 1 on a tent: the classical s-concave case",
        params: &[
            ("f", "tent:0:1"),
            ("g", "tent:0:1"),
            ("p", "1"),
            ("s", "1"),
            ("mu", "0.5"),
            ("omega", "0.5"),
            ("nodes", "65"),
            ("resolution", "65"),
        ],
    },
    Preset {
        name: "lift-interval-s1",
        target: Target::LiftVolume,
        description: "lift of the indicator of [0,1] with s = 1; volume 2",
        params: &[("f", "indicator:0:1"), ("s", "1"), ("nodes", "65"), ("samples", "1000000")],
    },
    Preset {
        name: "lift-interval-s2",
        target: Target::LiftVolume,
        description: "lift of the indicator of [0,1] with s = 2; volume pi",
        params: &[("f", "indicator:0:1"), ("s", "2"), ("nodes", "65"), ("samples", "1000000")],
    },
    Preset {
        name: "lemma31-convex",
        target: Target::Lemma31,
        description: "tents under the filled hull of the L_2 coefficient curve",
        params: &[
            ("f", "tent:0:1"),
            ("g", "tent:0:1"),
            ("m", "lp_hull:2:33:0.015625"),
            ("s", "1"),
            ("condition", "convex_m"),
            ("nodes", "33"),
            ("out_nodes", "65"),
        ],
    },
    Preset {
        name: "lemma31-two-point",
        target: Target::Lemma31,
        description: "M = {(1,0), (0,1)} on the indicator of [0,1]: the pointwise max",
        params: &[
            ("f", "indicator:0:1"),
            ("g", "indicator:0:1"),
            ("m", "explicit:1,0;0,1"),
            ("s", "1"),
            ("condition", "origin_supports"),
            ("nodes", "33"),
            ("out_nodes", "33"),
        ],
    },
    Preset {
        name: "lemma32-indicator",
        target: Target::Lemma32,
        description: "lift inclusion for indicators of [0,1] under the L_2 curve",
        params: &[
            ("f", "indicator:0:1"),
            ("g", "indicator:0:1"),
            ("m", "lp:2:257"),
            ("s", "1"),
            ("nodes", "65"),
            ("out_nodes", "129"),
            ("samples", "100000"),
        ],
    },
    Preset {
        name: "corollary-equal",
        target: Target::LpMinkowski,
        description: "f = g = indicator of [0,1]; equality with both sides 1",
        params: with_corollary!(("f", "indicator:0:1")),
    },
    Preset {
        name: "corollary-scaled",
        target: Target::LpMinkowski,
        description: "f = 2 x_{2,1} g for g the indicator of [0,1]; equality",
        params: with_corollary!(("f_scale", "2")),
    },
    Preset {
        name: "corollary-unequal",
        target: Target::LpMinkowski,
        description: "indicators of [0,1] and [0,3]; strict inequality",
        params: &[
            ("f", "indicator:0:1"),
            ("g", "indicator:0:3"),
            COROLLARY[1],
            COROLLARY[2],
            COROLLARY[3],
            COROLLARY[4],
            COROLLARY[5],
            COROLLARY[6],
        ],
    },
];

pub fn find_preset(name: &str) -> Result<&'static Preset> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| config(format!("unknown preset {name:?}; see `lplab demo --list`")))
}

/// One line per preset: name, target, description.
pub fn catalog() -> String {
    let width = PRESETS.iter().map(|p| p.name.len()).max().unwrap_or(0);
    PRESETS
        .iter()
        .map(|p| format!("{:width$}  {:13} {}\n", p.name, p.target.as_str(), p.description))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_use_only_their_targets_keys() {
        for p in PRESETS {
            p.target
                .check_keys(p.params.iter().map(|(k, _)| *k))
                .unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn names_are_unique_and_round_trip() {
        for (i, p) in PRESETS.iter().enumerate() {
            assert!(PRESETS[i + 1..].iter().all(|q| q.name != p.name));
        }
        for t in Target::ALL {
            assert_eq!(t.as_str().parse::<Target>().unwrap(), t);
        }
    }
}
