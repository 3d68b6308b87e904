//! Text formats: the JSON matrix document, the random-campaign spec string,
//! angle arguments, and number rendering.
//!
//! A matrix document looks like
//!
//! ```json
//! { "n": 2, "entries": [[[2, -3], [0, 0]], [[0, 0], [3, 2]]], "label": "example" }
//! ```
//!
//! `entries` is row-major and each entry is an `[re, im]` pair. Unknown keys
//! are ignored. Finite values survive a parse/serialize round trip bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::Theta;
use crate::linalg::{ComplexMatrix, MAX_DIM};
use crate::verify::{Ensemble, RandomMatrixSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn from_matrix(t: &ComplexMatrix, label: Option<String>) -> Self {
        let n = t.dim();
        let entries = (0..n).map(|i| t.row(i).iter().map(|z| [z.re, z.im]).collect()).collect();
        Self { n, entries, label }
    }

    pub fn parse_str(s: &str) -> Result<Self> {
        Self::parse_bytes(s.as_bytes())
    }

    /// Parses and validates; never panics on arbitrary input.
    pub fn parse_bytes(bytes: &[u8]) -> Result<Self> {
        let doc: MatrixDocument = serde_json::from_slice(bytes).map_err(|e| Error::Document(e.to_string()))?;
        doc.to_matrix()?;
        Ok(doc)
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        if n > MAX_DIM {
            return Err(Error::TooLarge(n));
        }
        if self.entries.len() != n {
            return Err(Error::Document(format!("expected {n} rows, found {}", self.entries.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Document(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, &[re, im]) in row.iter().enumerate() {
                if !(re.is_finite() && im.is_finite()) {
                    return Err(Error::NonFinite(format!("entry ({i}, {j})")));
                }
                data.push(Complex64::new(re, im));
            }
        }
        ComplexMatrix::new(n, data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents hold only finite numbers")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents hold only finite numbers")
    }
}

/// A seeded batch of random matrices, written as whitespace-separated
/// `key=value` pairs: `n=3 count=20 seed=7 [ensemble=normal] [scale=2]`.
///
/// Without `ensemble` the batch cycles through every ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomCampaign {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub ensemble: Option<Ensemble>,
    pub scale: f64,
}

/// Largest accepted `count` in a campaign spec.
pub const MAX_CAMPAIGN: usize = 100_000;

impl RandomCampaign {
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidArgument(msg);
        let (mut n, mut count, mut seed, mut ensemble, mut scale) = (None, None, None, None, None);
        for token in s.split_whitespace() {
            let (key, value) =
                token.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {token:?}")))?;
            let dup = || bad(format!("duplicate key {key:?}"));
            match key {
                "n" => {
                    let v = value.parse().map_err(|_| bad(format!("bad n {value:?}")))?;
                    n.replace(v).map_or(Ok(()), |_| Err(dup()))?;
                }
                "count" => {
                    let v = value.parse().map_err(|_| bad(format!("bad count {value:?}")))?;
                    count.replace(v).map_or(Ok(()), |_| Err(dup()))?;
                }
                "seed" => {
                    let v = value.parse().map_err(|_| bad(format!("bad seed {value:?}")))?;
                    seed.replace(v).map_or(Ok(()), |_| Err(dup()))?;
                }
                "ensemble" => {
                    let v = Ensemble::parse(value).ok_or_else(|| bad(format!("unknown ensemble {value:?}")))?;
                    ensemble.replace(v).map_or(Ok(()), |_| Err(dup()))?;
                }
                "scale" => {
                    let v: f64 = value.parse().map_err(|_| bad(format!("bad scale {value:?}")))?;
                    scale.replace(v).map_or(Ok(()), |_| Err(dup()))?;
                }
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        let campaign = Self {
            n: n.ok_or_else(|| bad("missing n".into()))?,
            count: count.unwrap_or(1),
            seed: seed.unwrap_or(0),
            ensemble,
            scale: scale.unwrap_or(1.0),
        };
        if campaign.count == 0 || campaign.count > MAX_CAMPAIGN {
            return Err(bad(format!("count must be in [1, {MAX_CAMPAIGN}]")));
        }
        campaign.spec(0).validate()?;
        Ok(campaign)
    }

    pub fn spec(&self, index: usize) -> RandomMatrixSpec {
        let ensemble = self.ensemble.unwrap_or(Ensemble::ALL[index % Ensemble::ALL.len()]);
        let seed = crate::sphere::splitmix64(self.seed.wrapping_add(index as u64));
        RandomMatrixSpec { n: self.n, ensemble, scale: self.scale, seed }
    }

    pub fn specs(&self) -> Vec<RandomMatrixSpec> {
        (0..self.count).map(|k| self.spec(k)).collect()
    }
}

/// Parses an angle in radians. Unit suffixes such as `deg` or `°` are
/// rejected rather than converted.
pub fn parse_theta(s: &str) -> Result<Theta> {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    if lower.ends_with("deg") || lower.ends_with("degrees") || s.ends_with('°') {
        return Err(Error::InvalidArgument(format!("angles are in radians; degree input {s:?} is not accepted")));
    }
    let x: f64 = lower
        .strip_suffix("rad")
        .unwrap_or(&lower)
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("not a number of radians: {s:?}")))?;
    Theta::new(x).map_err(|_| Error::InvalidArgument(format!("angle must be finite, got {s:?}")))
}

/// `x` with 10 significant digits, without trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{}", if x == 0.0 { 0.0 } else { x });
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..10).contains(&exp) {
        let decimals = (9 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.9e}")
    }
}

/// `a+bi` with 10 significant digits per part.
pub fn format_complex(z: Complex64) -> String {
    let im = format_sig(z.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{abs}i", format_sig(z.re)),
        None => format!("{}+{im}i", format_sig(z.re)),
    }
}

/// `a+bi` using the shortest decimal strings that parse back to the same bits.
pub fn format_complex_exact(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Entries joined with `;`, each in [`format_complex_exact`] form.
pub fn format_vector_exact(v: &[Complex64]) -> String {
    v.iter().map(|&z| format_complex_exact(z)).collect::<Vec<_>>().join(";")
}
