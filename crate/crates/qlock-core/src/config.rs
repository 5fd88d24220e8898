//! Structured text formats: experiment configs, locking-scheme files, and
//! channel descriptions. All are TOML with strict schemas (unknown fields
//! rejected) so that a config typo fails loudly instead of silently running
//! a different experiment.

use serde::{Deserialize, Serialize};

use crate::channels;
use crate::error::{Error, Result};
use crate::locking::LockingScheme;
use crate::qcore::{CMat, KrausChannel, C64};

// ---------------------------------------------------------------------------
// Locking-scheme files
// ---------------------------------------------------------------------------

/// On-disk form of a locking scheme.
///
/// Field order: `format`, `msg_dim`, then exactly one of `haar_keys`
/// (seed-based regeneration, recorded RNG) or `explicit_keys` (row-major
/// interleaved re/im arrays). Explicit matrices round-trip exactly: TOML
/// floats are emitted with full precision.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub format: String,
    pub msg_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub haar_keys: Option<HaarKeys>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicit_keys: Option<ExplicitKeys>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct HaarKeys {
    pub rng: String,
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExplicitKeys {
    /// One entry per key: row-major [re, im, re, im, …] of the |M|×|M|
    /// unitary.
    pub matrices: Vec<Vec<f64>>,
}

pub const SCHEME_FORMAT: &str = "qlock-scheme-v1";

impl SchemeFile {
    pub fn from_haar(msg_dim: usize, count: usize, seed: u64) -> Self {
        Self {
            format: SCHEME_FORMAT.into(),
            msg_dim,
            haar_keys: Some(HaarKeys { rng: crate::rng::RNG_ALGORITHM.into(), seed, count }),
            explicit_keys: None,
        }
    }

    pub fn from_scheme(scheme: &LockingScheme) -> Self {
        let matrices = scheme
            .key_unitaries()
            .iter()
            .map(|u| {
                let mut flat = Vec::with_capacity(2 * u.len());
                for r in 0..u.nrows() {
                    for c in 0..u.ncols() {
                        flat.push(u[(r, c)].re);
                        flat.push(u[(r, c)].im);
                    }
                }
                flat
            })
            .collect();
        Self {
            format: SCHEME_FORMAT.into(),
            msg_dim: scheme.msg_dim(),
            haar_keys: None,
            explicit_keys: Some(ExplicitKeys { matrices }),
        }
    }

    /// Reconstruct the scheme (regenerating Haar keys from the recorded
    /// seed, or decoding explicit matrices).
    pub fn build(&self) -> Result<LockingScheme> {
        if self.format != SCHEME_FORMAT {
            return Err(Error::Config(format!(
                "unsupported scheme format {:?}",
                self.format
            )));
        }
        if self.msg_dim == 0 || self.msg_dim > crate::qcore::MAX_DIM {
            return Err(Error::Config(format!(
                "msg_dim {} outside 1..={}",
                self.msg_dim,
                crate::qcore::MAX_DIM
            )));
        }
        match (&self.haar_keys, &self.explicit_keys) {
            (Some(h), None) => {
                if h.rng != crate::rng::RNG_ALGORITHM {
                    return Err(Error::Config(format!(
                        "unknown rng {:?} (expected {:?})",
                        h.rng,
                        crate::rng::RNG_ALGORITHM
                    )));
                }
                if h.count == 0 || h.count > 4096 {
                    return Err(Error::Config(format!("key count {} outside 1..=4096", h.count)));
                }
                LockingScheme::haar(self.msg_dim, h.count, h.seed)
            }
            (None, Some(e)) => {
                let d = self.msg_dim;
                let mut keys = Vec::with_capacity(e.matrices.len());
                for flat in &e.matrices {
                    if flat.len() != 2 * d * d {
                        return Err(Error::Config(format!(
                            "explicit key has {} numbers, expected {}",
                            flat.len(),
                            2 * d * d
                        )));
                    }
                    let mut m = CMat::zeros(d, d);
                    for r in 0..d {
                        for c in 0..d {
                            let base = 2 * (r * d + c);
                            m[(r, c)] = C64::new(flat[base], flat[base + 1]);
                        }
                    }
                    keys.push(m);
                }
                LockingScheme::new(self.msg_dim, keys)
            }
            _ => Err(Error::Config(
                "scheme file needs exactly one of haar_keys or explicit_keys".into(),
            )),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Channel descriptions
// ---------------------------------------------------------------------------

/// Channel constructible from a config: a named family with parameters or
/// explicit Kraus arrays.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelSpec {
    Identity { dim: usize },
    Depolarizing { dim: usize, p: f64 },
    Erasure { dim: usize, p: f64 },
    AmplitudeDamping { gamma: f64 },
    Dephasing { q: f64 },
    /// Qubit depolarizing in rank-one (measure-and-prepare) Kraus form.
    DepolarizingRankOne { p: f64 },
    Explicit {
        in_dim: usize,
        out_dim: usize,
        /// One entry per Kraus operator: row-major interleaved re/im.
        kraus: Vec<Vec<f64>>,
    },
}

impl ChannelSpec {
    pub fn build(&self) -> Result<KrausChannel> {
        match self {
            ChannelSpec::Identity { dim } => KrausChannel::identity_channel(*dim),
            ChannelSpec::Depolarizing { dim, p } => channels::depolarizing(*dim, *p),
            ChannelSpec::Erasure { dim, p } => channels::erasure(*dim, *p),
            ChannelSpec::AmplitudeDamping { gamma } => channels::amplitude_damping(*gamma),
            ChannelSpec::Dephasing { q } => channels::dephasing(*q),
            ChannelSpec::DepolarizingRankOne { p } => channels::depolarizing_rank_one(*p),
            ChannelSpec::Explicit { in_dim, out_dim, kraus } => {
                if *in_dim == 0 || *out_dim == 0 {
                    return Err(Error::Config("explicit channel with zero dim".into()));
                }
                let mut ops = Vec::with_capacity(kraus.len());
                for flat in kraus {
                    if flat.len() != 2 * in_dim * out_dim {
                        return Err(Error::Config(format!(
                            "Kraus operator has {} numbers, expected {}",
                            flat.len(),
                            2 * in_dim * out_dim
                        )));
                    }
                    let mut m = CMat::zeros(*out_dim, *in_dim);
                    for r in 0..*out_dim {
                        for c in 0..*in_dim {
                            let base = 2 * (r * in_dim + c);
                            m[(r, c)] = C64::new(flat[base], flat[base + 1]);
                        }
                    }
                    ops.push(m);
                }
                KrausChannel::new(ops)
            }
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Experiment configs
// ---------------------------------------------------------------------------

/// One experiment per config file, tagged by `experiment`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "experiment", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ExperimentConfig {
    LockSim(LockSimConfig),
    BosonicBounds(BosonicBoundsConfig),
    PpmSim(PpmSimConfig),
    EbCheck(EbCheckConfig),
    Wiretap(WiretapConfig),
    Accinfo(AccinfoConfig),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentConfig::LockSim(c) => c.seed,
            ExperimentConfig::BosonicBounds(c) => c.seed,
            ExperimentConfig::PpmSim(c) => c.seed,
            ExperimentConfig::EbCheck(c) => c.seed,
            ExperimentConfig::Wiretap(c) => c.seed,
            ExperimentConfig::Accinfo(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::LockSim(c) => c.seed = seed,
            ExperimentConfig::BosonicBounds(c) => c.seed = seed,
            ExperimentConfig::PpmSim(c) => c.seed = seed,
            ExperimentConfig::EbCheck(c) => c.seed = seed,
            ExperimentConfig::Wiretap(c) => c.seed = seed,
            ExperimentConfig::Accinfo(c) => c.seed = seed,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ExperimentConfig::LockSim(_) => "lock-sim",
            ExperimentConfig::BosonicBounds(_) => "bosonic-bounds",
            ExperimentConfig::PpmSim(_) => "ppm-sim",
            ExperimentConfig::EbCheck(_) => "eb-check",
            ExperimentConfig::Wiretap(_) => "wiretap",
            ExperimentConfig::Accinfo(_) => "accinfo",
        }
    }
}

fn default_restarts() -> usize {
    2
}

fn default_iters() -> usize {
    15
}

fn default_epsilon() -> f64 {
    1.0 / 16.0
}

/// Build a scheme, decode over a channel, run the adversary suite, report
/// the security criterion and the r1/r2 ratios.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LockSimConfig {
    pub msg_dim: usize,
    pub num_keys: usize,
    pub seed: u64,
    /// "strong" hands Eve the channel input; "weak" the complementary output.
    pub attack: AttackModel,
    #[serde(default = "default_restarts")]
    pub optimizer_restarts: usize,
    #[serde(default = "default_iters")]
    pub optimizer_iters: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Channel between Alice and Bob; Eve's side is derived from `attack`.
    pub channel: ChannelSpec,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum AttackModel {
    Strong,
    Weak,
}

/// Sweep of the coherent-state bounds over N_S (and η for the weak bound).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BosonicBoundsConfig {
    pub seed: u64,
    pub n_s_min: f64,
    pub n_s_max: f64,
    pub n_s_steps: usize,
    pub etas: Vec<f64>,
    /// Also verify the Wehrl closed forms at these thermal occupations.
    #[serde(default)]
    pub wehrl_thermal: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PpmSimConfig {
    pub n_modes: usize,
    pub eta: f64,
    pub num_keys: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Present ⇒ weak-coherent variant with this amplitude (re, im).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<(f64, f64)>,
    #[serde(default = "default_restarts")]
    pub optimizer_restarts: usize,
    #[serde(default = "default_iters")]
    pub optimizer_iters: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EbCheckConfig {
    pub seed: u64,
    /// Random ensembles for the zero-capacity certificate (rank-one
    /// channels only).
    #[serde(default)]
    pub certificate_ensembles: usize,
    #[serde(default)]
    pub ensemble_states: usize,
    pub channel: ChannelSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WiretapConfig {
    pub seed: u64,
    /// Number of random signal states for the private-information search.
    pub signal_states: usize,
    pub priors: usize,
    pub base: WiretapBase,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WiretapBase {
    AmplitudeDamping { gamma: f64 },
    Dephasing { q: f64 },
    ConstantEve { channel: ChannelSpec },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AccinfoConfig {
    pub seed: u64,
    /// Two-pure-state qubit ensemble overlap in [0,1).
    pub overlap: f64,
    #[serde(default = "default_restarts")]
    pub optimizer_restarts: usize,
    #[serde(default = "default_iters")]
    pub optimizer_iters: usize,
    /// Grid size of the brute-force projective oracle.
    #[serde(default)]
    pub oracle_angles: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::max_abs;

    #[test]
    fn scheme_file_haar_round_trip_regenerates_identical_keys() {
        let file = SchemeFile::from_haar(8, 3, 42);
        let text = file.to_toml().unwrap();
        let parsed = SchemeFile::from_toml(&text).unwrap();
        assert_eq!(file, parsed);
        let a = file.build().unwrap();
        let b = parsed.build().unwrap();
        for (x, y) in a.key_unitaries().iter().zip(b.key_unitaries()) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn scheme_file_explicit_round_trip_is_exact() {
        let scheme = LockingScheme::haar(5, 2, 7).unwrap();
        let file = SchemeFile::from_scheme(&scheme);
        let text = file.to_toml().unwrap();
        let rebuilt = SchemeFile::from_toml(&text).unwrap().build().unwrap();
        for (x, y) in scheme.key_unitaries().iter().zip(rebuilt.key_unitaries()) {
            // Bit-exact float round trip through TOML.
            assert!(max_abs(&(x - y)) == 0.0);
        }
    }

    #[test]
    fn scheme_file_rejects_bad_inputs() {
        assert!(SchemeFile::from_toml("format = 3").is_err());
        let both = r#"
format = "qlock-scheme-v1"
msg_dim = 2
[haar_keys]
rng = "chacha8"
seed = 1
count = 1
[explicit_keys]
matrices = []
"#;
        assert!(SchemeFile::from_toml(both).unwrap().build().is_err());
        let neither = r#"
format = "qlock-scheme-v1"
msg_dim = 2
"#;
        assert!(SchemeFile::from_toml(neither).unwrap().build().is_err());
        let unknown = r#"
format = "qlock-scheme-v1"
msg_dim = 2
surprise = true
"#;
        assert!(SchemeFile::from_toml(unknown).is_err());
        // Non-unitary explicit key.
        let bad = SchemeFile {
            format: SCHEME_FORMAT.into(),
            msg_dim: 2,
            haar_keys: None,
            explicit_keys: Some(ExplicitKeys {
                matrices: vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.5, 0.0]],
            }),
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn channel_spec_builds() {
        let spec = ChannelSpec::from_toml("name = \"depolarizing\"\ndim = 2\np = 0.5").unwrap();
        let ch = spec.build().unwrap();
        assert_eq!(ch.in_dim(), 2);

        let spec: ChannelSpec =
            toml::from_str("name = \"erasure\"\ndim = 3\np = 0.25").unwrap();
        assert_eq!(spec.build().unwrap().out_dim(), 4);

        // Explicit identity.
        let spec = ChannelSpec::Explicit {
            in_dim: 2,
            out_dim: 2,
            kraus: vec![vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0]],
        };
        let text = toml::to_string(&spec).unwrap();
        let parsed = ChannelSpec::from_toml(&text).unwrap();
        assert_eq!(spec, parsed);
        assert!(parsed.build().is_ok());

        // Unknown channel name.
        assert!(ChannelSpec::from_toml("name = \"teleporter\"").is_err());
        // Parameter out of range.
        assert!(ChannelSpec::from_toml("name = \"depolarizing\"\ndim = 2\np = 1.5")
            .unwrap()
            .build()
            .is_err());
    }

    #[test]
    fn experiment_config_parses_and_rejects_unknown_fields() {
        let text = r#"
experiment = "lock-sim"
msg_dim = 16
num_keys = 4
seed = 7
attack = "strong"

[channel]
name = "identity"
dim = 16
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(cfg.kind(), "lock-sim");
        assert_eq!(cfg.seed(), 7);

        let bad = text.replace("num_keys = 4", "num_keys = 4\nbanana = 1");
        assert!(ExperimentConfig::from_toml(&bad).is_err());
    }
}
