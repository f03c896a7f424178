//! The descent-complementing bijection on linear extensions of the `pm`
//! poset family, with full verification of its three defining clauses.
//!
//! Extensions of the `pm` poset are the permutations whose inverses sort
//! both parity classes: `sigma(1) < sigma(3) < ...`, `sigma(2) < sigma(4)
//! < ...` and `sigma(1) < sigma(2m)`. One distinguished word `tau` is set
//! aside; the rest splits into strata by descent count, and an explicit
//! construction maps the stratum with `i` descents bijectively onto the
//! stratum with `m - i`. The construction assembles the image word one
//! letter at a time from the sorted odd and even subscripts that are not
//! adjacent to a descent; each step must match exactly one arm of a fixed
//! case table, and any ambiguity aborts with a diagnostic dump rather than
//! guessing.

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::poset::{Permutation, Poset};

/// Everything needed to evaluate and verify the bijection for one `m`.
#[derive(Debug, Clone)]
pub struct XiContext {
    m: usize,
    poset: Poset,
    extensions: BTreeSet<Permutation>,
    tau: Permutation,
    /// `strata[i]` = extensions other than `tau` with exactly `i` descents.
    strata: Vec<Vec<Permutation>>,
}

impl XiContext {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau(&self) -> &Permutation {
        &self.tau
    }

    pub fn stratum(&self, i: usize) -> &[Permutation] {
        &self.strata[i]
    }

    pub fn stratum_sizes(&self) -> Vec<usize> {
        self.strata.iter().map(Vec::len).collect()
    }

    pub fn extensions(&self) -> &BTreeSet<Permutation> {
        &self.extensions
    }

    pub fn contains(&self, perm: &Permutation) -> bool {
        self.extensions.contains(perm)
    }
}

/// Builds the context for the `pm` poset with parameter `m >= 3`.
///
/// The extension set is computed through the poset backtracker; for small
/// `m` it is recomputed independently by filtering the full symmetric group
/// and the two must agree.
pub fn build_context(m: usize) -> Result<XiContext> {
    if m < 3 {
        return Err(Error::InvalidInput(format!(
            "the bijection context needs m >= 3, got {m}"
        )));
    }
    let poset = Poset::family_pm(m)?;
    let extensions: BTreeSet<Permutation> = poset.linear_extensions().into_iter().collect();

    if m <= 4 {
        let filtered = filter_symmetric_group(m)?;
        if filtered != extensions {
            return Err(Error::Internal(
                "symmetric-group filter disagrees with the extension backtracker".into(),
            ));
        }
    }

    let mut word = vec![1];
    for k in 1..m {
        word.push(2 * k + 1);
        word.push(2 * k);
    }
    word.push(2 * m);
    let tau = Permutation::new(word)?;
    if !extensions.contains(&tau) {
        return Err(Error::Internal("tau is not an extension word".into()));
    }
    if tau.descent_count() != m - 1 {
        return Err(Error::Internal(format!(
            "tau has {} descents, expected m - 1 = {}",
            tau.descent_count(),
            m - 1
        )));
    }

    let mut strata = vec![Vec::new(); m + 1];
    for perm in &extensions {
        if perm == &tau {
            continue;
        }
        let d = perm.descent_count();
        if d > m {
            return Err(Error::Internal(format!(
                "extension {perm} has {d} descents, beyond the socle degree {m}"
            )));
        }
        strata[d].push(perm.clone());
    }
    Ok(XiContext {
        m,
        poset,
        extensions,
        tau,
        strata,
    })
}

/// Direct definition of the extension set: inverses of the permutations
/// with both parity classes sorted and the cross condition.
fn filter_symmetric_group(m: usize) -> Result<BTreeSet<Permutation>> {
    let n = 2 * m;
    let mut out = BTreeSet::new();
    for word in (1..=n).permutations(n) {
        let sigma = Permutation::new(word)?;
        let sorted_odds = (1..m).all(|k| sigma.at(2 * k - 1) < sigma.at(2 * k + 1));
        let sorted_evens = (1..m).all(|k| sigma.at(2 * k) < sigma.at(2 * k + 2));
        if sorted_odds && sorted_evens && sigma.at(1) < sigma.at(n) {
            out.insert(sigma.inverse());
        }
    }
    Ok(out)
}

/// The image word together with the anchor subscripts it was built from.
#[derive(Debug, Clone)]
pub struct XiStep {
    pub image: Permutation,
    /// Odd subscripts not adjacent to a descent, ascending.
    pub odd_anchors: Vec<usize>,
    /// Even subscripts not adjacent to a descent, ascending.
    pub even_anchors: Vec<usize>,
}

/// Applies the bijection to one extension word (not `tau`).
pub fn xi(context: &XiContext, perm: &Permutation) -> Result<Permutation> {
    Ok(xi_step(context, perm)?.image)
}

pub fn xi_step(context: &XiContext, perm: &Permutation) -> Result<XiStep> {
    let m = context.m;
    let n = 2 * m;
    if perm == &context.tau {
        return Err(Error::InvalidInput(
            "tau is excluded from the bijection domain".into(),
        ));
    }
    if !context.contains(perm) {
        return Err(Error::InvalidInput(format!(
            "{perm} is not an extension word of the pm poset"
        )));
    }

    let descents = perm.descent_set();
    let removed: HashSet<usize> = descents
        .iter()
        .flat_map(|&j| [perm.at(j), perm.at(j + 1)])
        .collect();
    for &j in &descents {
        if (perm.at(j) + perm.at(j + 1)) % 2 != 1 {
            return Err(Error::Internal(format!(
                "descent pair at position {j} of {perm} has equal parities"
            )));
        }
    }
    let odd_anchors: Vec<usize> = (1..=n).step_by(2).filter(|x| !removed.contains(x)).collect();
    let even_anchors: Vec<usize> = (2..=n)
        .step_by(2)
        .filter(|x| !removed.contains(x))
        .collect();
    let k = m - descents.len();
    if odd_anchors.len() != k || even_anchors.len() != k {
        return Err(Error::Internal(format!(
            "anchor counts {} / {} differ from m - d = {k} for {perm}",
            odd_anchors.len(),
            even_anchors.len()
        )));
    }

    // With every element adjacent to a descent there are no anchors and
    // each case table degenerates to its increment arm: the image is the
    // identity word, the unique extension without descents.
    if k == 0 {
        return Ok(XiStep {
            image: Permutation::new((1..=n).collect())?,
            odd_anchors,
            even_anchors,
        });
    }

    // Thresholds (p_j + q_j + 1) / 2 are integers because the anchors have
    // opposite parities; a fractional threshold would be a transcription
    // bug, so check before dividing.
    let mut thresholds = Vec::with_capacity(k);
    for j in 0..k {
        let sum = odd_anchors[j] + even_anchors[j] + 1;
        if sum % 2 != 0 {
            return Err(Error::Internal(format!(
                "threshold ({} + {} + 1) / 2 is not an integer",
                odd_anchors[j], even_anchors[j]
            )));
        }
        thresholds.push(sum / 2);
    }

    let p = &odd_anchors;
    let q = &even_anchors;
    let mut word: Vec<usize> = Vec::with_capacity(n);
    word.push(if p[0] > 1 { 1 } else { 2 });

    let dump = |l: usize, a: usize| {
        format!(
            "pi = {perm}, position = {l}, letter = {a}, odd anchors = {p:?}, even anchors = {q:?}"
        )
    };

    for l in 1..n {
        let a = word[l - 1] as i64;
        let next: usize = if l < thresholds[0] {
            // Leading phase, anchored by (p_1, q_1).
            let (p1, q1) = (p[0] as i64, q[0] as i64);
            let mut arms = Vec::new();
            if a <= p1.min(q1) - 2 {
                arms.push(a + 1);
            }
            if a == q1 && q1 > p1 {
                arms.push(p1);
            }
            if a == p1 && p1 > q1 {
                arms.push(q1);
            }
            pick_arm(arms, a + 2, || dump(l, a as usize))?
        } else if l >= thresholds[k - 1] {
            // Trailing phase, anchored by (p_k, q_k).
            let (pk, qk) = (p[k - 1] as i64, q[k - 1] as i64);
            let mut arms = Vec::new();
            if a >= pk.max(qk) + 1 {
                arms.push(a + 1);
            }
            pick_arm(arms, a + 2, || dump(l, a as usize))?
        } else {
            // Middle phase between consecutive anchor pairs.
            let j = (1..k)
                .find(|&j| thresholds[j - 1] <= l && l < thresholds[j])
                .ok_or_else(|| {
                    Error::Internal(format!("no phase covers position {l}: {}", dump(l, a as usize)))
                })?;
            let (pp, qp) = (p[j - 1] as i64, q[j - 1] as i64);
            let (pc, qc) = (p[j] as i64, q[j] as i64);
            let mut arms = Vec::new();
            if pp.max(qp) + 1 <= a && a <= pc.min(qc) - 2 {
                arms.push(a + 1);
            }
            if a <= pp && pp > qp && a + 2 == qc {
                arms.push(pp + 2);
            }
            if a <= qp && qp > pp && a + 2 == pc {
                arms.push(qp + 2);
            }
            if a == qc && qc > pc {
                arms.push(pc);
            }
            if a == pc && pc > qc {
                arms.push(qc);
            }
            pick_arm(arms, a + 2, || dump(l, a as usize))?
        };
        word.push(next);
    }

    let image = Permutation::new(word).map_err(|e| {
        Error::Internal(format!("constructed word is not a permutation: {e}"))
    })?;
    Ok(XiStep {
        image,
        odd_anchors,
        even_anchors,
    })
}

fn pick_arm<F: Fn() -> String>(arms: Vec<i64>, otherwise: i64, dump: F) -> Result<usize> {
    let value = match arms.len() {
        0 => otherwise,
        1 => arms[0],
        _ => {
            return Err(Error::Internal(format!(
                "case table is ambiguous ({arms:?}): {}",
                dump()
            )))
        }
    };
    if value < 1 {
        return Err(Error::Internal(format!(
            "case table produced a nonpositive letter {value}: {}",
            dump()
        )));
    }
    Ok(value as usize)
}

/// Outcome of one verification clause.
#[derive(Debug, Clone)]
pub struct ClauseResult {
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl ClauseResult {
    fn pass() -> ClauseResult {
        ClauseResult {
            passed: true,
            counterexample: None,
        }
    }

    fn fail(&mut self, example: String) {
        if self.passed {
            self.passed = false;
            self.counterexample = Some(example);
        }
    }
}

/// Verification of the bijection over every stratum.
#[derive(Debug, Clone)]
pub struct BijectionReport {
    pub m: usize,
    pub stratum_sizes: Vec<usize>,
    /// Images are permutations with complementary descent count and the
    /// predicted descent set.
    pub descent_complement: ClauseResult,
    /// Images are again extension words of the poset.
    pub order_preserving: ClauseResult,
    /// Each stratum maps injectively onto a stratum of equal size.
    pub bijective: ClauseResult,
    /// The degenerate anchor configuration never occurs off `tau`.
    pub forbidden_case: ClauseResult,
}

impl BijectionReport {
    pub fn all_passed(&self) -> bool {
        self.descent_complement.passed
            && self.order_preserving.passed
            && self.bijective.passed
            && self.forbidden_case.passed
    }
}

/// Runs the image construction on every non-`tau` extension and checks the
/// three clauses, recording the first counterexample per clause.
pub fn verify_bijection(context: &XiContext) -> Result<BijectionReport> {
    let m = context.m;
    let n = 2 * m;
    let mut descent_complement = ClauseResult::pass();
    let mut order_preserving = ClauseResult::pass();
    let mut bijective = ClauseResult::pass();
    let mut forbidden_case = ClauseResult::pass();

    for i in 0..=m {
        let mut images = HashSet::new();
        for perm in context.stratum(i) {
            let step = xi_step(context, perm)?;
            let image = &step.image;

            if m - i == 1 && step.odd_anchors[0] == 1 && step.even_anchors[0] == n {
                forbidden_case.fail(format!("m={m} i={i} pi={perm}"));
            }

            let predicted: Vec<usize> = (0..m - i)
                .map(|j| (step.odd_anchors[j] + step.even_anchors[j] - 1) / 2)
                .collect();
            if image.descent_count() != m - i || image.descent_set() != predicted {
                descent_complement.fail(format!(
                    "m={m} i={i} pi={perm} image={image} descents={:?} predicted={predicted:?}",
                    image.descent_set()
                ));
            }

            // Membership in the extension set, plus the direct
            // order-preserving check on the inverse map.
            let inverse = image.inverse();
            let mut monotone = true;
            for a in 0..n {
                for b in 0..n {
                    if context.poset.less(a, b) && inverse.at(a + 1) >= inverse.at(b + 1) {
                        monotone = false;
                    }
                }
            }
            if !context.contains(image) || !monotone {
                order_preserving.fail(format!("m={m} i={i} pi={perm} image={image}"));
            }

            if !images.insert(image.clone()) {
                bijective.fail(format!("m={m} i={i} duplicate image {image}"));
            }
        }
        if context.stratum(i).len() != context.stratum(m - i).len() {
            bijective.fail(format!(
                "m={m}: stratum {i} has {} words, stratum {} has {}",
                context.stratum(i).len(),
                m - i,
                context.stratum(m - i).len()
            ));
        }
    }

    Ok(BijectionReport {
        m,
        stratum_sizes: context.stratum_sizes(),
        descent_complement,
        order_preserving,
        bijective,
        forbidden_case,
    })
}
