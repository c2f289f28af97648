//! Trigonometric-polynomial governing functions `g(x) = sum_m g_m e^{imx}`
//! and their Maclaurin re-expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{CScalar, I};

/// `g(x) = sum_{m=-M}^{M} g_m e^{imx}` with a declared degree `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    degree: usize,
    // g_m stored at index m + M
    coeffs: Vec<CScalar>,
}

/// Wire format: `{"M": int, "coeffs": [[m, re, im], ...]}`. Frequencies not
/// listed are zero.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrigPolyJson {
    #[serde(rename = "M")]
    pub degree: usize,
    pub coeffs: Vec<(i64, f64, f64)>,
}

impl TrigPoly {
    /// `coeffs[j]` is `g_{j - M}`; the slice must hold `2M + 1` values.
    pub fn new(degree: usize, coeffs: Vec<CScalar>) -> Result<Self> {
        if coeffs.len() != 2 * degree + 1 {
            return Err(Error::InvalidParameter(format!(
                "degree {degree} needs {} coefficients, got {}",
                2 * degree + 1,
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidParameter("non-finite Fourier coefficient".into()));
        }
        Ok(Self { degree, coeffs })
    }

    /// Build from `(m, g_m)` pairs; unlisted frequencies are zero.
    pub fn from_terms(degree: usize, terms: &[(i64, CScalar)]) -> Result<Self> {
        let mut coeffs = vec![CScalar::new(0.0, 0.0); 2 * degree + 1];
        let mut seen = vec![false; coeffs.len()];
        for &(m, g) in terms {
            if m.unsigned_abs() as usize > degree {
                return Err(Error::InvalidParameter(format!(
                    "frequency {m} exceeds declared degree {degree}"
                )));
            }
            let idx = (m + degree as i64) as usize;
            if seen[idx] {
                return Err(Error::InvalidParameter(format!("frequency {m} listed twice")));
            }
            seen[idx] = true;
            coeffs[idx] = g;
        }
        Self::new(degree, coeffs)
    }

    /// `g(x) = a (1 - e^{ix})`.
    pub fn case_study(a: CScalar) -> Self {
        Self::shifted_case_study(a, CScalar::new(1.0, 0.0))
    }

    /// `g(x) = a (1 - b e^{ix})`.
    pub fn shifted_case_study(a: CScalar, b: CScalar) -> Self {
        Self {
            degree: 1,
            coeffs: vec![CScalar::new(0.0, 0.0), a, -a * b],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `g_m`, zero outside `[-M, M]`.
    pub fn coeff(&self, m: i64) -> CScalar {
        if m.unsigned_abs() as usize > self.degree {
            CScalar::new(0.0, 0.0)
        } else {
            self.coeffs[(m + self.degree as i64) as usize]
        }
    }

    pub fn frequencies(&self) -> impl Iterator<Item = (i64, CScalar)> + '_ {
        let d = self.degree as i64;
        self.coeffs.iter().enumerate().map(move |(j, &g)| (j as i64 - d, g))
    }

    pub fn eval(&self, x: CScalar) -> CScalar {
        self.frequencies().map(|(m, g)| g * (I * (m as f64) * x).exp()).sum()
    }

    /// `c_n = sum_m g_m (im)^n / n!` for `n = 0..=n_max`.
    pub fn maclaurin(&self, n_max: usize) -> MaclaurinSeries {
        let mut coeffs = vec![CScalar::new(0.0, 0.0); n_max + 1];
        for (m, g) in self.frequencies() {
            if g == CScalar::new(0.0, 0.0) {
                continue;
            }
            let step = I * m as f64;
            let mut term = CScalar::new(1.0, 0.0);
            coeffs[0] += g;
            for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
                term *= step / n as f64;
                *c += g * term;
            }
        }
        MaclaurinSeries { coeffs }
    }

    /// True iff `g_m == 0` exactly for every `m < 0`.
    pub fn has_nonnegative_frequencies_only(&self) -> bool {
        self.frequencies()
            .all(|(m, g)| m >= 0 || g == CScalar::new(0.0, 0.0))
    }

    /// Smallest negative frequency carrying a nonzero coefficient.
    pub fn first_negative_frequency(&self) -> Option<i64> {
        self.frequencies()
            .find(|&(m, g)| m < 0 && g != CScalar::new(0.0, 0.0))
            .map(|(m, _)| m)
    }

    /// Default `(C0, R0)` for the Carleman bound: `R0 = max(M, 1)` and `C0` the
    /// smallest constant with `|c_n| <= C0 R0^{n-1} / n!` for `1 <= n <= n_max`.
    pub fn growth_constants(&self, n_max: usize) -> (f64, f64) {
        let r0 = self.degree.max(1) as f64;
        (self.maclaurin(n_max).growth_constant(r0), r0)
    }

    pub fn to_json(&self) -> TrigPolyJson {
        TrigPolyJson {
            degree: self.degree,
            coeffs: self.frequencies().map(|(m, g)| (m, g.re, g.im)).collect(),
        }
    }

    pub fn from_json(json: &TrigPolyJson) -> Result<Self> {
        let terms: Vec<(i64, CScalar)> = json
            .coeffs
            .iter()
            .map(|&(m, re, im)| (m, CScalar::new(re, im)))
            .collect();
        Self::from_terms(json.degree, &terms).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: TrigPolyJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("trig polynomial: {e}")))?;
        Self::from_json(&json)
    }
}

/// Maclaurin coefficients `c_0 ..= c_{n_max}` of a governing function.
#[derive(Debug, Clone, PartialEq)]
pub struct MaclaurinSeries {
    coeffs: Vec<CScalar>,
}

impl MaclaurinSeries {
    pub fn from_coeffs(coeffs: Vec<CScalar>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("empty Maclaurin series".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> CScalar {
        self.coeffs.get(n).copied().unwrap_or(CScalar::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[CScalar] {
        &self.coeffs
    }

    /// Truncated sum `sum_{n <= n_max} c_n x^n` (Horner).
    pub fn eval(&self, x: CScalar) -> CScalar {
        self.coeffs
            .iter()
            .rev()
            .fold(CScalar::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    /// `max_{1 <= n <= n_max} |c_n| n! / R0^{n-1}`.
    pub fn growth_constant(&self, r0: f64) -> f64 {
        let mut scale = r0; // n! / R0^{n-1} at n = 0 would be R0
        let mut best: f64 = 0.0;
        for (n, c) in self.coeffs.iter().enumerate().skip(1) {
            scale *= n as f64 / r0;
            best = best.max(c.norm() * scale);
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> CScalar {
        CScalar::new(re, im)
    }

    #[test]
    fn case_study_vanishes_at_origin() {
        let g = TrigPoly::case_study(c(0.3, 0.9));
        assert_eq!(g.eval(c(0.0, 0.0)), c(0.0, 0.0));
        let g = TrigPoly::case_study(c(1.0, 0.0));
        assert!((g.eval(c(std::f64::consts::PI, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn shifted_case_study_at_origin() {
        let g = TrigPoly::shifted_case_study(c(1.0, 0.0), c(4.0 / 3.0, 0.0));
        assert!((g.eval(c(0.0, 0.0)) - c(-1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn maclaurin_constant_term_is_coefficient_sum() {
        let g = TrigPoly::new(1, vec![c(0.5, 1.0), c(-2.0, 0.25), c(0.0, 3.0)]).unwrap();
        let s = g.maclaurin(4);
        assert!((s.coeff(0) - c(-1.5, 4.25)).norm() < 1e-15);
    }

    #[test]
    fn maclaurin_of_case_study() {
        let a = c(0.6, -0.8);
        let s = TrigPoly::case_study(a).maclaurin(8);
        assert_eq!(s.coeff(0), c(0.0, 0.0));
        let mut fact = 1.0;
        for n in 1..=8 {
            fact *= n as f64;
            let expect = -a * I.powu(n as u32) / fact;
            assert!((s.coeff(n) - expect).norm() < 1e-16, "n = {n}");
        }
    }

    #[test]
    fn maclaurin_of_twice_cosine() {
        let g = TrigPoly::from_terms(1, &[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        let s = g.maclaurin(2);
        assert!(s.coeff(1).norm() < 1e-16);
        assert!((s.coeff(2) - c(-1.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn frequency_test_is_exact() {
        assert!(TrigPoly::case_study(c(1.0, 0.0)).has_nonnegative_frequencies_only());
        let g = TrigPoly::from_terms(1, &[(-1, c(1.0, 0.0))]).unwrap();
        assert!(!g.has_nonnegative_frequencies_only());
        let g = TrigPoly::from_terms(2, &[(-2, c(1e-30, 0.0)), (0, c(1.0, 0.0))]).unwrap();
        assert!(!g.has_nonnegative_frequencies_only());
        assert_eq!(g.first_negative_frequency(), Some(-2));
    }

    #[test]
    fn case_study_growth_constants_are_one() {
        let (c0, r0) = TrigPoly::case_study(c(0.0, 1.0)).growth_constants(20);
        assert!((c0 - 1.0).abs() < 1e-14);
        assert_eq!(r0, 1.0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g = TrigPoly::from_terms(2, &[(0, c(1.0, 2.0)), (-2, c(0.5, 0.0))]).unwrap();
        let s = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(TrigPoly::from_json_str(&s).unwrap(), g);
        assert!(TrigPoly::from_json_str(r#"{"M": 1, "coeffs": [[2, 1.0, 0.0]]}"#).is_err());
        assert!(TrigPoly::from_json_str(r#"{"M": 1, "coeffs": [[1, 1.0, 0.0], [1, 0.0, 0.0]]}"#).is_err());
        assert!(TrigPoly::from_json_str(r#"{"coeffs": []}"#).is_err());
    }
}
