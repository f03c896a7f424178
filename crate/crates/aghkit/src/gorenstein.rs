//! Numerical Gorenstein / almost Gorenstein classification over h-vectors.
//!
//! All criteria operate on a [`RingProfile`]: an h-vector plus the flags and
//! invariants a caller actually knows (domain, Cohen-Macaulay type, the
//! degree-0 embedding hypothesis, optionally a canonical-module generator
//! degree histogram). The classifier runs a fixed rule list; the first rule
//! that fires decides the verdict, every applicable rule is recorded, and a
//! disagreement between applicable rules rejects the profile as inconsistent
//! — such data cannot come from an actual graded ring, and the classifier
//! never guesses.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ehrhart::HVector;
use crate::error::{Error, Result};

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Gorenstein,
    AlmostGorenstein,
    NotAlmostGorenstein,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Gorenstein => "Gorenstein",
            Verdict::AlmostGorenstein => "AlmostGorenstein",
            Verdict::NotAlmostGorenstein => "NotAlmostGorenstein",
            Verdict::Undecided => "Undecided",
        };
        write!(f, "{s}")
    }
}

/// What we know about a Cohen-Macaulay homogeneous ring, numerically.
#[derive(Debug, Clone)]
pub struct RingProfile {
    h: HVector,
    cm_type: Option<BigInt>,
    is_domain: bool,
    satisfies_embedding: bool,
    /// `generator_degrees[j]` = number of minimal canonical-module
    /// generators in relative degree `j` above the minimal one, for
    /// `j = 0..=s-1`.
    generator_degrees: Option<Vec<BigInt>>,
}

impl RingProfile {
    /// A domain always admits the degree-0 embedding into its shifted
    /// canonical module, so `is_domain` forces the embedding flag.
    pub fn new(h: HVector, is_domain: bool, satisfies_embedding: bool) -> RingProfile {
        RingProfile {
            h,
            cm_type: None,
            is_domain,
            satisfies_embedding: satisfies_embedding || is_domain,
            generator_degrees: None,
        }
    }

    pub fn with_cm_type(mut self, r: BigInt) -> RingProfile {
        self.cm_type = Some(r);
        self
    }

    pub fn with_generator_degrees(mut self, degrees: Vec<BigInt>) -> RingProfile {
        self.generator_degrees = Some(degrees);
        self
    }

    pub fn h(&self) -> &HVector {
        &self.h
    }

    pub fn is_domain(&self) -> bool {
        self.is_domain
    }
}

/// The partial sums `h'_j = (h_s + ... + h_{s-j}) - (h_0 + ... + h_j)` for
/// `j = 0..=s-1`; these are the Hilbert coefficients of the embedding
/// cokernel.
pub fn cumulative_diffs(h: &HVector) -> Vec<BigInt> {
    let s = h.socle_degree();
    let mut out = Vec::with_capacity(s);
    let mut top = BigInt::zero();
    let mut bottom = BigInt::zero();
    for j in 0..s {
        top += h.get(s - j);
        bottom += h.get(j);
        out.push(&top - &bottom);
    }
    out
}

/// Multiplicity of the embedding cokernel: the sum of the cumulative
/// differences. A negative difference is impossible under the embedding
/// hypothesis and is rejected.
pub fn e_c(h: &HVector) -> Result<BigInt> {
    let diffs = cumulative_diffs(h);
    if let Some(j) = diffs.iter().position(|d| d.is_negative()) {
        return Err(Error::InconsistentProfile(format!(
            "cumulative inequality fails at j = {j}: h violates the embedding hypothesis"
        )));
    }
    Ok(diffs.into_iter().sum())
}

/// Minimal generator count of the cokernel: `r - 1`.
pub fn mu_c(r: &BigInt) -> Result<BigInt> {
    if r < &BigInt::one() {
        return Err(Error::InvalidInput(format!(
            "Cohen-Macaulay type must be at least 1, got {r}"
        )));
    }
    Ok(r - BigInt::one())
}

/// Full symmetry `h_i = h_{s-i}` for all `i`.
pub fn is_gorenstein_symmetric(h: &HVector) -> bool {
    let s = h.socle_degree();
    (0..=s / 2).all(|i| h.get(i) == h.get(s - i))
}

/// Almost-symmetry: `h_i = h_{s-i}` for `i = 0..=floor(s/2) - 1`. For even
/// `s` the middle equality holds automatically, so this coincides with full
/// symmetry; for odd `s` the two middle entries are unconstrained.
pub fn suff_almost_symmetric(h: &HVector) -> bool {
    let s = h.socle_degree();
    (0..s / 2).all(|i| h.get(i) == h.get(s - i))
}

/// Upper bound for the Cohen-Macaulay type of a homogeneous domain:
/// `sum_{i=2}^{s} h_i - (s - 2) h_1`. Defined for socle degree at least 2.
pub fn type_upper_bound(h: &HVector) -> Result<BigInt> {
    let s = h.socle_degree();
    if s < 2 {
        return Err(Error::NotApplicable(
            "the type bound needs socle degree at least 2".into(),
        ));
    }
    let sum: BigInt = (2..=s).map(|i| h.get(i)).sum();
    Ok(sum - BigInt::from(s as u64 - 2) * h.get(1))
}

/// A classification result: the verdict, the cokernel invariants, the rules
/// that applied, and any warnings.
#[derive(Debug, Clone)]
pub struct AGReport {
    pub verdict: Verdict,
    pub e_c: BigInt,
    pub mu_c: Option<BigInt>,
    pub cumulative_diffs: Vec<BigInt>,
    pub criteria_fired: Vec<String>,
    pub warnings: Vec<String>,
}

/// Decision procedure over a ring profile. The embedding hypothesis is a
/// precondition; every applicable rule is evaluated, the first one decides,
/// and rule disagreement means the profile is not realizable and is
/// rejected as inconsistent.
pub fn classify(profile: &RingProfile) -> Result<AGReport> {
    if !profile.satisfies_embedding {
        return Err(Error::InvalidInput(
            "classification requires the degree-0 embedding hypothesis".into(),
        ));
    }
    let h = &profile.h;
    let s = h.socle_degree();
    let diffs = cumulative_diffs(h);
    let e_c = e_c(h)?;
    let symmetric = is_gorenstein_symmetric(h);
    let bound = if s >= 2 { Some(type_upper_bound(h)?) } else { None };

    // Validate the type and the generator-degree histogram against each
    // other and against the h-vector.
    let mut effective_r = profile.cm_type.clone();
    if let Some(r) = &profile.cm_type {
        if r < &BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "Cohen-Macaulay type must be at least 1, got {r}"
            )));
        }
        if r < &h.get(s) {
            return Err(Error::InconsistentProfile(format!(
                "type {r} is smaller than h_s = {}",
                h.get(s)
            )));
        }
        if r.is_one() && !symmetric {
            return Err(Error::InconsistentProfile(
                "type 1 forces a symmetric h-vector".into(),
            ));
        }
        if profile.is_domain {
            if let Some(b) = &bound {
                if r > b {
                    return Err(Error::InconsistentProfile(format!(
                        "type {r} exceeds the domain type bound {b}"
                    )));
                }
            }
        }
    }
    if let Some(degrees) = &profile.generator_degrees {
        if degrees.len() != s.max(1) {
            return Err(Error::InvalidInput(format!(
                "generator degree histogram must cover degrees 0..={}, got {} entries",
                s.max(1) - 1,
                degrees.len()
            )));
        }
        if degrees.iter().any(Signed::is_negative) {
            return Err(Error::InvalidInput(
                "generator degree counts must be nonnegative".into(),
            ));
        }
        if degrees[0] != h.get(s) {
            return Err(Error::InconsistentProfile(format!(
                "{} minimal-degree generators, but h_s = {}",
                degrees[0],
                h.get(s)
            )));
        }
        let total: BigInt = degrees.iter().sum();
        match &effective_r {
            Some(r) if *r != total => {
                return Err(Error::InconsistentProfile(format!(
                    "generator degrees sum to {total} but the type is {r}"
                )))
            }
            Some(_) => {}
            None => effective_r = Some(total),
        }
    }

    let mut fired: Vec<(String, Verdict)> = Vec::new();
    if symmetric && profile.is_domain {
        fired.push(("symmetric-gorenstein".into(), Verdict::Gorenstein));
    }
    if s == 1 {
        fired.push(("socle-degree-one".into(), Verdict::AlmostGorenstein));
    }
    if suff_almost_symmetric(h) {
        fired.push(("almost-symmetric".into(), Verdict::AlmostGorenstein));
    }
    if profile.is_domain && s == 2 {
        let v = if h.get(2).is_one() {
            Verdict::AlmostGorenstein
        } else {
            Verdict::NotAlmostGorenstein
        };
        fired.push(("domain-socle-two".into(), v));
    }
    if profile.is_domain && s == 3 {
        let v = if h.get(3).is_one() {
            Verdict::AlmostGorenstein
        } else {
            Verdict::NotAlmostGorenstein
        };
        fired.push(("domain-socle-three".into(), v));
    }
    if let Some(r) = &effective_r {
        let v = if r - BigInt::one() == e_c {
            Verdict::AlmostGorenstein
        } else {
            Verdict::NotAlmostGorenstein
        };
        fired.push(("type-matches-cokernel".into(), v));
    }
    if let Some(degrees) = &profile.generator_degrees {
        let matches = (1..s).all(|j| degrees[j] == diffs[j]);
        let v = if matches {
            Verdict::AlmostGorenstein
        } else {
            Verdict::NotAlmostGorenstein
        };
        fired.push(("generator-degrees".into(), v));
    }
    let mut derived_bound_gap = false;
    if profile.is_domain && s >= 2 && h.get(s) > BigInt::one() {
        if let Some(b) = &bound {
            if &e_c > &(b - BigInt::one()) {
                fired.push(("bound-gap".into(), Verdict::NotAlmostGorenstein));
                derived_bound_gap = true;
            }
        }
    }

    let positive = fired.iter().any(|(_, v)| {
        matches!(v, Verdict::Gorenstein | Verdict::AlmostGorenstein)
    });
    let negative = fired
        .iter()
        .any(|(_, v)| matches!(v, Verdict::NotAlmostGorenstein));
    if positive && negative {
        let names: Vec<&str> = fired.iter().map(|(n, _)| n.as_str()).collect();
        return Err(Error::InconsistentProfile(format!(
            "applicable rules disagree ({}): no graded ring has this profile",
            names.join(", ")
        )));
    }

    let verdict = fired.first().map(|(_, v)| *v).unwrap_or(Verdict::Undecided);
    let mut warnings = Vec::new();
    if profile.is_domain
        && s >= 2
        && verdict == Verdict::AlmostGorenstein
        && h.get(s) > BigInt::one()
    {
        warnings.push(format!(
            "almost Gorenstein verdict for a domain with h_s = {} > 1: \
             the trailing coefficient of such a domain must be 1, so the \
             profile data is suspect",
            h.get(s)
        ));
    }
    if derived_bound_gap {
        warnings.push(
            "bound-gap is a derived rule (type bound combined with mu(C) = r - 1), \
             not a standalone criterion"
                .into(),
        );
    }

    Ok(AGReport {
        verdict,
        e_c,
        mu_c: effective_r.as_ref().map(|r| r - BigInt::one()),
        cumulative_diffs: diffs,
        criteria_fired: fired.into_iter().map(|(n, _)| n).collect(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(coeffs: &[u64]) -> HVector {
        HVector::from_u64(coeffs).unwrap()
    }

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn cumulative_diffs_examples() {
        let diffs: Vec<BigInt> = cumulative_diffs(&h(&[1, 4, 7, 1]));
        assert_eq!(diffs, vec![bi(0), bi(3), bi(0)]);
        assert_eq!(cumulative_diffs(&h(&[1, 2, 1])), vec![bi(0), bi(0)]);
        assert_eq!(cumulative_diffs(&h(&[1, 3])), vec![bi(2)]);
        assert!(cumulative_diffs(&h(&[1])).is_empty());
    }

    #[test]
    fn cokernel_multiplicity() {
        assert_eq!(e_c(&h(&[1, 4, 7, 1])).unwrap(), bi(3));
        assert_eq!(e_c(&h(&[1, 2, 1])).unwrap(), bi(0));
        // h = (1, 0, 2) has h_2 + h_1 < h_0 + h_1 at j = 1? No: check a
        // genuinely violating vector: (1, 5, 2) gives j=1 diff (2+5)-(1+5)=1,
        // j=0 diff 1; use (1, 3, 0, 1): j=1: (1+0)-(1+3) = -3.
        assert!(e_c(&h(&[1, 3, 0, 1])).is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_c(&bi(1)).unwrap(), bi(0));
        assert_eq!(mu_c(&bi(4)).unwrap(), bi(3));
        assert!(mu_c(&bi(0)).is_err());
    }

    #[test]
    fn symmetry_tests() {
        assert!(!is_gorenstein_symmetric(&h(&[1, 4, 7, 1])));
        assert!(!is_gorenstein_symmetric(&h(&[1, 6, 16, 26, 6, 1])));
        assert!(is_gorenstein_symmetric(&h(&[1, 2, 1])));
        assert!(is_gorenstein_symmetric(&h(&[1])));
    }

    #[test]
    fn almost_symmetry_tests() {
        assert!(suff_almost_symmetric(&h(&[1, 4, 7, 1])));
        assert!(suff_almost_symmetric(&h(&[1, 8, 29, 64, 99, 29, 8, 1])));
        // s = 2 checks only i = 0.
        assert!(suff_almost_symmetric(&h(&[1, 3, 1])));
        assert!(!suff_almost_symmetric(&h(&[1, 1, 2, 2])));
        // Even socle degree: almost-symmetry is full symmetry.
        assert!(!suff_almost_symmetric(&h(&[1, 2, 3, 1, 1])));
    }

    #[test]
    fn type_bound_examples() {
        assert_eq!(type_upper_bound(&h(&[1, 4, 7, 1])).unwrap(), bi(4));
        // s = 2: the bound is h_2 (levelness).
        assert_eq!(type_upper_bound(&h(&[1, 5, 3])).unwrap(), bi(3));
        assert!(type_upper_bound(&h(&[1, 3])).is_err());
    }

    #[test]
    fn classify_published_verdicts() {
        let report = classify(&RingProfile::new(h(&[1, 4, 7, 1]), true, true)).unwrap();
        assert_eq!(report.verdict, Verdict::AlmostGorenstein);
        assert!(report.criteria_fired.contains(&"almost-symmetric".to_string()));
        assert!(report
            .criteria_fired
            .contains(&"domain-socle-three".to_string()));
        assert_eq!(report.e_c, bi(3));
        assert!(report.warnings.is_empty());

        let report = classify(&RingProfile::new(h(&[1, 2, 3]), true, true)).unwrap();
        assert_eq!(report.verdict, Verdict::NotAlmostGorenstein);

        let report = classify(&RingProfile::new(h(&[1, 5]), false, true)).unwrap();
        assert_eq!(report.verdict, Verdict::AlmostGorenstein);

        let report = classify(&RingProfile::new(h(&[1, 2, 1]), true, true)).unwrap();
        assert_eq!(report.verdict, Verdict::Gorenstein);
        assert_eq!(report.e_c, bi(0));
        assert!(report.cumulative_diffs.iter().all(Zero::is_zero));
    }

    #[test]
    fn classify_with_type_criterion() {
        // h with e_C = 2: r - 1 = 2 must hold for an AG verdict.
        let profile = RingProfile::new(h(&[1, 1, 3, 1]), true, true).with_cm_type(bi(3));
        let report = classify(&profile).unwrap();
        assert_eq!(report.verdict, Verdict::AlmostGorenstein);
        assert_eq!(report.mu_c, Some(bi(2)));

        // An s = 4 profile reachable only through the type rule:
        // diffs of (1, 2, 4, 3, 1) are (0, 1, 1, 0), so e_C = 2.
        let profile = RingProfile::new(h(&[1, 2, 4, 3, 1]), false, true).with_cm_type(bi(2));
        let report = classify(&profile).unwrap();
        assert_eq!(report.verdict, Verdict::NotAlmostGorenstein);
        assert_eq!(report.criteria_fired, vec!["type-matches-cokernel"]);
    }

    #[test]
    fn classify_undecided_without_data() {
        let report = classify(&RingProfile::new(h(&[1, 2, 4, 3, 1]), false, true)).unwrap();
        assert_eq!(report.verdict, Verdict::Undecided);
        assert!(report.criteria_fired.is_empty());
    }

    #[test]
    fn inconsistent_profiles_are_rejected() {
        // r < h_s.
        let profile = RingProfile::new(h(&[1, 1, 3]), true, true).with_cm_type(bi(2));
        assert!(matches!(classify(&profile), Err(Error::InconsistentProfile(_))));

        // Type 1 with an asymmetric h-vector.
        let profile = RingProfile::new(h(&[1, 2, 3, 1]), false, true).with_cm_type(bi(1));
        assert!(matches!(classify(&profile), Err(Error::InconsistentProfile(_))));

        // Almost-symmetric vector with a type that contradicts the
        // cokernel count: no ring realizes it.
        let profile = RingProfile::new(h(&[1, 1, 3, 1]), true, true).with_cm_type(bi(2));
        assert!(matches!(classify(&profile), Err(Error::InconsistentProfile(_))));

        // Embedding hypothesis not asserted.
        assert!(classify(&RingProfile::new(h(&[1, 2]), false, false)).is_err());
    }

    #[test]
    fn trailing_coefficient_warning_fires_exactly_for_suspect_domains() {
        // diffs of (1, 1, 4, 1, 2) are (1, 1, 1, 1): e_C = 4, bound = 5,
        // so r = 5 passes validation and the type rule says AG. A domain
        // verdict with h_s = 2 > 1 must carry the warning.
        let profile = RingProfile::new(h(&[1, 1, 4, 1, 2]), true, true).with_cm_type(bi(5));
        let report = classify(&profile).unwrap();
        assert_eq!(report.verdict, Verdict::AlmostGorenstein);
        assert_eq!(report.warnings.len(), 1);

        // Same data without the domain flag: no warning.
        let profile = RingProfile::new(h(&[1, 1, 4, 1, 2]), false, true).with_cm_type(bi(5));
        assert!(classify(&profile).unwrap().warnings.is_empty());
    }

    #[test]
    fn generator_degree_criterion_agrees_with_type_criterion() {
        // diffs of (1,1,3,1) are (0, 2, 0); histogram (h_s, d_1, d_2) = (1, 2, 0).
        let profile = RingProfile::new(h(&[1, 1, 3, 1]), true, true)
            .with_generator_degrees(vec![bi(1), bi(2), bi(0)]);
        let report = classify(&profile).unwrap();
        assert_eq!(report.verdict, Verdict::AlmostGorenstein);
        assert!(report
            .criteria_fired
            .contains(&"generator-degrees".to_string()));
        assert_eq!(report.mu_c, Some(bi(2)));

        // Histogram inconsistent with h_s is rejected.
        let profile = RingProfile::new(h(&[1, 1, 3, 1]), true, true)
            .with_generator_degrees(vec![bi(2), bi(1), bi(0)]);
        assert!(classify(&profile).is_err());
    }
}
