//! Lower bounds on the product and the sum of two channel skew
//! informations.
//!
//! All bounds consume the tilde matrices of the two channels. Product-form
//! bounds (`zhou`, `thm1_*`, `thm2`) sit below I(A) * I(B); sum-form bounds
//! (`fu_*`, `thm3_*`) sit below I(A) + I(B). The chain
//! zhou <= thm1_proof <= thm2 <= product holds pointwise: the first step is
//! the triangle inequality applied entrywise, the second is the
//! rearrangement inequality, the third is Cauchy-Schwarz.
//!
//! Two knobs deserve a note. `thm1_bound` has a `proof_form` (the squared
//! sum of entrywise modulus products) and a weaker `statement_form` (the sum
//! of squared products); only the proof form is guaranteed to dominate
//! `zhou`. And the double-sum variant of `thm3_bound` carries a 1/n
//! prefactor so it stays a valid lower bound when the channels have more
//! than one Kraus operator.

use itertools::Itertools;
use num_complex::Complex64;

pub use crate::matcore::Permutation;
use crate::matcore::{hs_inner, sort_abs_descending, vectorize, ComplexMatrix};
use crate::quantum::{pad_kraus, unitary_residual, DensityState, KrausChannel};
use crate::skew::{half_norm_sqr, tilde_set};
use crate::{Error, Result};

/// Exhaustive permutation searches over Kraus pairings stop here.
pub const MAX_EXHAUSTIVE_KRAUS: usize = 8;

/// Stable identifiers for every bound the crate evaluates; these strings are
/// the CSV column names and the CLI vocabulary, so they must not change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundId {
    Zhou,
    Thm1Proof,
    Thm1Stmt,
    Thm2,
    FuPerTerm,
    FuGlobal,
    Thm3Id,
    Thm3Desc,
}

/// Whether a bound sits under the product or the sum of the two channel
/// skew informations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Product,
    Sum,
}

impl BoundId {
    pub const ALL: [BoundId; 8] = [
        BoundId::Zhou,
        BoundId::Thm1Proof,
        BoundId::Thm1Stmt,
        BoundId::Thm2,
        BoundId::FuPerTerm,
        BoundId::FuGlobal,
        BoundId::Thm3Id,
        BoundId::Thm3Desc,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundId::Zhou => "zhou",
            BoundId::Thm1Proof => "thm1_proof",
            BoundId::Thm1Stmt => "thm1_stmt",
            BoundId::Thm2 => "thm2",
            BoundId::FuPerTerm => "fu_perterm",
            BoundId::FuGlobal => "fu_global",
            BoundId::Thm3Id => "thm3_id",
            BoundId::Thm3Desc => "thm3_desc",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == text)
            .ok_or_else(|| Error::Parse(format!("unknown bound identifier `{text}`")))
    }

    pub fn kind(self) -> BoundKind {
        match self {
            BoundId::Zhou | BoundId::Thm1Proof | BoundId::Thm1Stmt | BoundId::Thm2 => {
                BoundKind::Product
            }
            _ => BoundKind::Sum,
        }
    }
}

impl std::fmt::Display for BoundId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which display of the entrywise product bound to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm1Variant {
    /// (sum_st |a_st||b_st|)^2 per operator pair; dominates `zhou`.
    ProofForm,
    /// sum_st |a_st|^2 |b_st|^2 per operator pair; valid but weaker.
    StatementForm,
}

/// Sign handling inside the permutation-maximized sum bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FuSignMode {
    /// Pick the better of I(L+K), I(L-K) independently for each pair.
    PerTerm,
    /// One sign for the whole pairing.
    Global,
}

/// How operator pairs enter the parallelogram sum bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm3Pairing {
    /// Average the full double sum over pairs (valid for every n).
    DoubleSumNormalized,
    /// Match operators one to one and maximize over the pairing.
    MatchedPairs,
}

/// Choice of the free self-pairing permutations in the parallelogram bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermStrategy {
    /// Pair each entry with itself; saturates the sum uncertainty.
    Identity,
    /// Pair entries with the stable modulus-descending rearrangement.
    Descending,
    /// Maximize over all of S_{d^2}; limited to d = 2.
    ExhaustiveSmall,
}

/// Labels and search artifacts attached to a [`BoundReport`].
#[derive(Debug, Clone)]
pub struct ReportMeta {
    pub state_label: String,
    pub channel_a: String,
    pub channel_b: String,
    pub channel_a_complete: bool,
    pub channel_b_complete: bool,
    pub fu_perterm_perm: Permutation,
    pub fu_global_perm: Permutation,
}

/// Product and sum uncertainties plus every evaluated bound for one
/// (state, channel pair) instance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub product_uncertainty: f64,
    pub sum_uncertainty: f64,
    pub bounds: Vec<(BoundId, f64)>,
    pub meta: ReportMeta,
}

impl BoundReport {
    pub fn value(&self, id: BoundId) -> Option<f64> {
        self.bounds.iter().find(|(b, _)| *b == id).map(|(_, v)| *v)
    }

    /// The quantity the given bound is a lower bound for.
    pub fn uncertainty_for(&self, id: BoundId) -> f64 {
        match id.kind() {
            BoundKind::Product => self.product_uncertainty,
            BoundKind::Sum => self.sum_uncertainty,
        }
    }
}

impl std::fmt::Display for BoundReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let completeness = |flag: bool| if flag { "complete" } else { "INCOMPLETE" };
        writeln!(f, "state     : {}", self.meta.state_label)?;
        writeln!(
            f,
            "channel A : {} ({})",
            self.meta.channel_a,
            completeness(self.meta.channel_a_complete)
        )?;
        writeln!(
            f,
            "channel B : {} ({})",
            self.meta.channel_b,
            completeness(self.meta.channel_b_complete)
        )?;
        writeln!(
            f,
            "fu perms  : per_term={} global={}",
            self.meta.fu_perterm_perm, self.meta.fu_global_perm
        )?;
        writeln!(f)?;
        writeln!(f, "{:<22} {:>20} form", "quantity", "value")?;
        writeln!(
            f,
            "{:<22} {:>20} -",
            "product_uncertainty",
            crate::fmt12(self.product_uncertainty)
        )?;
        writeln!(
            f,
            "{:<22} {:>20} -",
            "sum_uncertainty",
            crate::fmt12(self.sum_uncertainty)
        )?;
        for (id, value) in &self.bounds {
            let kind = match id.kind() {
                BoundKind::Product => "product",
                BoundKind::Sum => "sum",
            };
            writeln!(
                f,
                "{:<22} {:>20} {}",
                id.as_str(),
                crate::fmt12(*value),
                kind
            )?;
        }
        Ok(())
    }
}

fn check_channel_dims(state: &DensityState, a: &KrausChannel, b: &KrausChannel) -> Result<()> {
    if a.dim() != state.dim() || b.dim() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} vs channels {} and {}",
            state.dim(),
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

fn tilde_mats(state: &DensityState, ch: &KrausChannel) -> Result<Vec<ComplexMatrix>> {
    Ok(tilde_set(state, ch)?
        .tildes()
        .iter()
        .map(|t| t.matrix().clone())
        .collect())
}

fn zhou_kernel(ta: &[ComplexMatrix], tb: &[ComplexMatrix]) -> f64 {
    let mut total = 0.0;
    for x in ta {
        for y in tb {
            total += hs_inner(x, y).unwrap().norm_sqr();
        }
    }
    0.25 * total
}

fn thm1_kernel(ta: &[ComplexMatrix], tb: &[ComplexMatrix], variant: Thm1Variant) -> f64 {
    let mut total = 0.0;
    for x in ta {
        for y in tb {
            match variant {
                Thm1Variant::ProofForm => {
                    let s: f64 = x
                        .entries()
                        .iter()
                        .zip(y.entries())
                        .map(|(a, b)| a.norm() * b.norm())
                        .sum();
                    total += s * s;
                }
                Thm1Variant::StatementForm => {
                    total += x
                        .entries()
                        .iter()
                        .zip(y.entries())
                        .map(|(a, b)| a.norm_sqr() * b.norm_sqr())
                        .sum::<f64>();
                }
            }
        }
    }
    0.25 * total
}

fn sorted_moduli(t: &ComplexMatrix) -> Vec<f64> {
    sort_abs_descending(&vectorize(t))
        .entries()
        .iter()
        .map(|z| z.norm())
        .collect()
}

fn thm2_kernel(ta: &[ComplexMatrix], tb: &[ComplexMatrix]) -> f64 {
    let sa: Vec<Vec<f64>> = ta.iter().map(sorted_moduli).collect();
    let sb: Vec<Vec<f64>> = tb.iter().map(sorted_moduli).collect();
    let mut total = 0.0;
    for a in &sa {
        for b in &sb {
            let s: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            total += s * s;
        }
    }
    0.25 * total
}

/// Sum of |v_k| |v_{perm(k)}| with the permutation given by the strategy.
fn self_pair_sum(v: &[Complex64], strategy: PermStrategy) -> Result<f64> {
    let moduli: Vec<f64> = v.iter().map(|z| z.norm()).collect();
    match strategy {
        PermStrategy::Identity => Ok(moduli.iter().map(|m| m * m).sum()),
        PermStrategy::Descending => {
            let sigma = Permutation::descending_by_modulus(v);
            Ok(moduli
                .iter()
                .enumerate()
                .map(|(k, m)| m * moduli[sigma.apply(k)])
                .sum())
        }
        PermStrategy::ExhaustiveSmall => {
            if v.len() != 4 {
                return Err(Error::TooLarge);
            }
            let mut best = f64::NEG_INFINITY;
            for perm in (0..4).permutations(4) {
                let value: f64 = (0..4).map(|k| moduli[k] * moduli[perm[k]]).sum();
                if value > best {
                    best = value;
                }
            }
            Ok(best)
        }
    }
}

/// One parallelogram term: with m = vec(x + y) and w = vec(x - y), a
/// quarter of the two self-pair sums. With the identity strategy this is
/// exactly I(x-op) + I(y-op).
fn thm3_term(x: &ComplexMatrix, y: &ComplexMatrix, strategy: PermStrategy) -> Result<f64> {
    let m = vectorize(&x.add(y).unwrap());
    let w = vectorize(&x.sub(y).unwrap());
    Ok(0.25 * (self_pair_sum(m.entries(), strategy)? + self_pair_sum(w.entries(), strategy)?))
}

fn thm3_kernel(
    ta: &[ComplexMatrix],
    tb: &[ComplexMatrix],
    pairing: Thm3Pairing,
    strategy: PermStrategy,
) -> Result<f64> {
    let n = ta.len();
    debug_assert_eq!(n, tb.len());
    match pairing {
        Thm3Pairing::DoubleSumNormalized => {
            let mut total = 0.0;
            for x in ta {
                for y in tb {
                    total += thm3_term(x, y, strategy)?;
                }
            }
            Ok(total / n as f64)
        }
        Thm3Pairing::MatchedPairs => {
            if n > MAX_EXHAUSTIVE_KRAUS {
                return Err(Error::TooManyKraus {
                    n,
                    max: MAX_EXHAUSTIVE_KRAUS,
                });
            }
            let mut terms = vec![vec![0.0; n]; n];
            for (i, x) in ta.iter().enumerate() {
                for (j, y) in tb.iter().enumerate() {
                    terms[i][j] = thm3_term(x, y, strategy)?;
                }
            }
            let mut best = f64::NEG_INFINITY;
            for perm in (0..n).permutations(n) {
                let value: f64 = (0..n).map(|i| terms[i][perm[i]]).sum();
                if value > best {
                    best = value;
                }
            }
            Ok(best)
        }
    }
}

fn fu_kernel(
    ta: &[ComplexMatrix],
    tb: &[ComplexMatrix],
    mode: FuSignMode,
) -> Result<(f64, Permutation)> {
    let n = ta.len();
    debug_assert_eq!(n, tb.len());
    if n > MAX_EXHAUSTIVE_KRAUS {
        return Err(Error::TooManyKraus {
            n,
            max: MAX_EXHAUSTIVE_KRAUS,
        });
    }
    // plus[i][j] = I(L_i + K_j), minus[i][j] = I(L_i - K_j), both computed
    // through tilde linearity.
    let mut plus = vec![vec![0.0; n]; n];
    let mut minus = vec![vec![0.0; n]; n];
    for (i, x) in ta.iter().enumerate() {
        for (j, y) in tb.iter().enumerate() {
            plus[i][j] = half_norm_sqr(&x.add(y)?);
            minus[i][j] = half_norm_sqr(&x.sub(y)?);
        }
    }
    let mut best = f64::NEG_INFINITY;
    let mut best_perm: Vec<usize> = (0..n).collect();
    for perm in (0..n).permutations(n) {
        let value = match mode {
            FuSignMode::PerTerm => {
                0.5 * (0..n)
                    .map(|i| plus[i][perm[i]].max(minus[i][perm[i]]))
                    .sum::<f64>()
            }
            FuSignMode::Global => {
                let p: f64 = (0..n).map(|i| plus[i][perm[i]]).sum();
                let m: f64 = (0..n).map(|i| minus[i][perm[i]]).sum();
                0.5 * p.max(m)
            }
        };
        if value > best {
            best = value;
            best_perm = perm;
        }
    }
    Ok((best, Permutation::new(best_perm)?))
}

/// Product-form bound from pairwise tilde overlaps:
/// (1/4) sum_ij |tr(L~_i^H K~_j)|^2.
pub fn zhou_bound(state: &DensityState, a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    check_channel_dims(state, a, b)?;
    Ok(zhou_kernel(&tilde_mats(state, a)?, &tilde_mats(state, b)?))
}

/// Entrywise product-form bound, in either of its two displays.
pub fn thm1_bound(
    state: &DensityState,
    a: &KrausChannel,
    b: &KrausChannel,
    variant: Thm1Variant,
) -> Result<f64> {
    check_channel_dims(state, a, b)?;
    Ok(thm1_kernel(
        &tilde_mats(state, a)?,
        &tilde_mats(state, b)?,
        variant,
    ))
}

/// Rearranged product-form bound: moduli sorted descending before pairing.
pub fn thm2_bound(state: &DensityState, a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    check_channel_dims(state, a, b)?;
    Ok(thm2_kernel(&tilde_mats(state, a)?, &tilde_mats(state, b)?))
}

/// Permutation-maximized sum-form bound: channels are zero-padded to a
/// common length n, then all n! pairings are searched exhaustively. Returns
/// the bound and the achieving permutation (the first maximizer in
/// lexicographic order).
pub fn fu_bound(
    state: &DensityState,
    a: &KrausChannel,
    b: &KrausChannel,
    mode: FuSignMode,
) -> Result<(f64, Permutation)> {
    check_channel_dims(state, a, b)?;
    let (pa, pb) = pad_kraus(a, b)?;
    fu_kernel(&tilde_mats(state, &pa)?, &tilde_mats(state, &pb)?, mode)
}

/// Parallelogram sum-form bound with a choice of pairing and of the free
/// self-pairing permutations.
pub fn thm3_bound(
    state: &DensityState,
    a: &KrausChannel,
    b: &KrausChannel,
    pairing: Thm3Pairing,
    strategy: PermStrategy,
) -> Result<f64> {
    check_channel_dims(state, a, b)?;
    let (pa, pb) = pad_kraus(a, b)?;
    thm3_kernel(
        &tilde_mats(state, &pa)?,
        &tilde_mats(state, &pb)?,
        pairing,
        strategy,
    )
}

fn require_unitary(m: &ComplexMatrix) -> Result<()> {
    let residual = unitary_residual(m);
    if residual > 1e-10 {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// The rearranged product-form bound specialized to two unitary operators.
pub fn unitary_product_bound(
    state: &DensityState,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<f64> {
    require_unitary(u)?;
    require_unitary(v)?;
    let a = KrausChannel::new(vec![u.clone()], "unitary U")?;
    let b = KrausChannel::new(vec![v.clone()], "unitary V")?;
    thm2_bound(state, &a, &b)
}

/// The parallelogram sum-form bound specialized to two unitary operators.
pub fn unitary_sum_bound(
    state: &DensityState,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    strategy: PermStrategy,
) -> Result<f64> {
    require_unitary(u)?;
    require_unitary(v)?;
    let a = KrausChannel::new(vec![u.clone()], "unitary U")?;
    let b = KrausChannel::new(vec![v.clone()], "unitary V")?;
    thm3_bound(state, &a, &b, Thm3Pairing::DoubleSumNormalized, strategy)
}

/// Evaluates both uncertainties and every bound identifier for one instance.
pub fn evaluate_all(
    state: &DensityState,
    a: &KrausChannel,
    b: &KrausChannel,
) -> Result<BoundReport> {
    check_channel_dims(state, a, b)?;
    let (pa, pb) = pad_kraus(a, b)?;
    let ta = tilde_mats(state, &pa)?;
    let tb = tilde_mats(state, &pb)?;

    let info_a: f64 = ta.iter().map(half_norm_sqr).sum();
    let info_b: f64 = tb.iter().map(half_norm_sqr).sum();

    let (fu_per, fu_per_perm) = fu_kernel(&ta, &tb, FuSignMode::PerTerm)?;
    let (fu_glob, fu_glob_perm) = fu_kernel(&ta, &tb, FuSignMode::Global)?;

    let bounds = vec![
        (BoundId::Zhou, zhou_kernel(&ta, &tb)),
        (
            BoundId::Thm1Proof,
            thm1_kernel(&ta, &tb, Thm1Variant::ProofForm),
        ),
        (
            BoundId::Thm1Stmt,
            thm1_kernel(&ta, &tb, Thm1Variant::StatementForm),
        ),
        (BoundId::Thm2, thm2_kernel(&ta, &tb)),
        (BoundId::FuPerTerm, fu_per),
        (BoundId::FuGlobal, fu_glob),
        (
            BoundId::Thm3Id,
            thm3_kernel(
                &ta,
                &tb,
                Thm3Pairing::DoubleSumNormalized,
                PermStrategy::Identity,
            )?,
        ),
        (
            BoundId::Thm3Desc,
            thm3_kernel(
                &ta,
                &tb,
                Thm3Pairing::DoubleSumNormalized,
                PermStrategy::Descending,
            )?,
        ),
    ];

    Ok(BoundReport {
        product_uncertainty: info_a * info_b,
        sum_uncertainty: info_a + info_b,
        bounds,
        meta: ReportMeta {
            state_label: format!("d={} state", state.dim()),
            channel_a: a.label().to_string(),
            channel_b: b.label().to_string(),
            channel_a_complete: a.is_complete(),
            channel_b_complete: b.is_complete(),
            fu_perterm_perm: fu_per_perm,
            fu_global_perm: fu_glob_perm,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::abs_pair_sum;
    use crate::quantum::{
        bit_flip, maximally_mixed, pauli_x, phase_damping, random_channel, random_state,
        ring_state, rotation_unitaries, state_from_bloch, BlochVector,
    };

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn north_pole() -> DensityState {
        state_from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap()
    }

    fn single(op: ComplexMatrix, label: &str) -> KrausChannel {
        KrausChannel::new(vec![op], label).unwrap()
    }

    fn ring_pd_bf_report() -> BoundReport {
        evaluate_all(
            &ring_state(std::f64::consts::FRAC_PI_4),
            &phase_damping(0.5).unwrap(),
            &bit_flip(0.5).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn everything_vanishes_on_the_maximally_mixed_state() {
        let s = maximally_mixed(2).unwrap();
        let report =
            evaluate_all(&s, &phase_damping(0.5).unwrap(), &bit_flip(0.3).unwrap()).unwrap();
        assert!(report.product_uncertainty.abs() < 1e-14);
        assert!(report.sum_uncertainty.abs() < 1e-14);
        for (_, v) in &report.bounds {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn identical_operators_saturate_the_product_chain() {
        let s = north_pole();
        let a = single(pauli_x(), "sx");
        let report = evaluate_all(&s, &a, &a).unwrap();
        assert!((report.product_uncertainty - 1.0).abs() < 1e-12);
        for id in [BoundId::Zhou, BoundId::Thm1Proof, BoundId::Thm2] {
            assert!(
                (report.value(id).unwrap() - 1.0).abs() < 1e-12,
                "{id} should saturate"
            );
        }
        // Identical channels also make the sum bound tight.
        assert!((report.value(BoundId::FuPerTerm).unwrap() - report.sum_uncertainty).abs() < 1e-12);
    }

    #[test]
    fn scaled_operator_instance_has_hand_computable_values() {
        // Tilde matrices are [[0,1],[-1,0]] and twice that, so every product
        // quantity is 4 except the statement-form variant, which is 2.
        let s = north_pole();
        let a = single(pauli_x(), "sx");
        let b = single(pauli_x().scale(c(2.0, 0.0)), "2sx");
        let report = evaluate_all(&s, &a, &b).unwrap();
        assert!((report.product_uncertainty - 4.0).abs() < 1e-12);
        assert!((report.value(BoundId::Zhou).unwrap() - 4.0).abs() < 1e-12);
        assert!((report.value(BoundId::Thm1Proof).unwrap() - 4.0).abs() < 1e-12);
        assert!((report.value(BoundId::Thm1Stmt).unwrap() - 2.0).abs() < 1e-12);
        assert!((report.value(BoundId::Thm2).unwrap() - 4.0).abs() < 1e-12);
        // I(A) + I(B) = 5; the sign search reaches 4.5, identity saturates.
        assert!((report.sum_uncertainty - 5.0).abs() < 1e-12);
        assert!((report.value(BoundId::FuPerTerm).unwrap() - 4.5).abs() < 1e-12);
        assert!((report.value(BoundId::Thm3Id).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn thm2_kernel_rearranges_misaligned_magnitudes() {
        let x = ComplexMatrix::new(
            2,
            2,
            vec![c(2.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let y = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let aligned = thm1_kernel(
            std::slice::from_ref(&x),
            std::slice::from_ref(&y),
            Thm1Variant::ProofForm,
        );
        let sorted = thm2_kernel(&[x], &[y]);
        assert!((aligned - 4.0).abs() < 1e-14);
        assert!((sorted - 6.25).abs() < 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn frozen_reference_values_for_the_builtin_family() {
        let report = ring_pd_bf_report();
        let checks = [
            (report.product_uncertainty, 0.011700072865674227),
            (report.sum_uncertainty, 0.22929661169169346),
            (report.value(BoundId::Zhou).unwrap(), 0.00083571949040530226),
            (
                report.value(BoundId::Thm1Proof).unwrap(),
                0.0016714389808106054,
            ),
            (
                report.value(BoundId::Thm1Stmt).unwrap(),
                0.00083571949040530248,
            ),
            (report.value(BoundId::Thm2).unwrap(), 0.010028633884863624),
        ];
        for (got, want) in checks {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn frozen_reference_values_for_the_rotation_pair() {
        let (u, v) = rotation_unitaries();
        let report = evaluate_all(&ring_state(std::f64::consts::FRAC_PI_4), &u, &v).unwrap();
        let checks = [
            (report.sum_uncertainty, 0.12135646002359532),
            (
                report.value(BoundId::FuPerTerm).unwrap(),
                0.076323567066969966,
            ),
            (
                report.value(BoundId::FuGlobal).unwrap(),
                0.076323567066969966,
            ),
            (report.value(BoundId::Thm3Id).unwrap(), 0.12135646002359532),
            (
                report.value(BoundId::Thm3Desc).unwrap(),
                0.11603884628203689,
            ),
        ];
        for (got, want) in checks {
            assert!((got - want).abs() < 1e-10, "{got} vs {want}");
        }

        let report0 = evaluate_all(&ring_state(0.0), &u, &v).unwrap();
        assert!((report0.product_uncertainty - 0.0063641908608186252).abs() < 1e-10);
        assert!(report0.value(BoundId::Zhou).unwrap().abs() < 1e-10);
        assert!(
            (report0.value(BoundId::Thm1Proof).unwrap() - 0.00048955314313989392).abs() < 1e-10
        );
        assert!((report0.value(BoundId::Thm2).unwrap() - 0.0058746377176787309).abs() < 1e-10);
    }

    #[test]
    fn fu_bound_on_single_kraus_channels_uses_the_trivial_permutation() {
        let (u, v) = rotation_unitaries();
        let s = ring_state(1.3);
        let (value, perm) = fu_bound(&s, &u, &v, FuSignMode::PerTerm).unwrap();
        assert_eq!(perm.mapping(), &[0]);
        let ia = crate::skew::skew_info_channel(&s, &u).unwrap();
        let ib = crate::skew::skew_info_channel(&s, &v).unwrap();
        assert!(value <= ia + ib + 1e-12);
    }

    #[test]
    fn fu_bound_per_term_dominates_global() {
        for seed in 0..15 {
            let s = random_state(3, seed).unwrap();
            let a = random_channel(3, 2, seed + 40).unwrap();
            let b = random_channel(3, 2, seed + 80).unwrap();
            let (per, _) = fu_bound(&s, &a, &b, FuSignMode::PerTerm).unwrap();
            let (glob, _) = fu_bound(&s, &a, &b, FuSignMode::Global).unwrap();
            assert!(per >= glob - 1e-12);
        }
    }

    #[test]
    fn fu_bound_caps_the_exhaustive_search() {
        let s = random_state(2, 3).unwrap();
        let a = random_channel(2, 9, 4).unwrap();
        let b = random_channel(2, 1, 5).unwrap();
        assert!(matches!(
            fu_bound(&s, &a, &b, FuSignMode::PerTerm),
            Err(Error::TooManyKraus { n: 9, .. })
        ));
    }

    #[test]
    fn fu_padding_handles_unequal_kraus_counts() {
        let s = ring_state(0.4);
        let (u, _) = rotation_unitaries();
        let b = bit_flip(0.3).unwrap();
        let (value, perm) = fu_bound(&s, &u, &b, FuSignMode::PerTerm).unwrap();
        assert_eq!(perm.len(), 2);
        let ia = crate::skew::skew_info_channel(&s, &u).unwrap();
        let ib = crate::skew::skew_info_channel(&s, &b).unwrap();
        assert!(value <= ia + ib + 1e-12);
        assert!(value >= 0.0);
    }

    #[test]
    fn thm3_identity_saturates_for_any_kraus_count() {
        for seed in 0..10 {
            let s = random_state(2, seed).unwrap();
            let a = random_channel(2, 3, seed + 7).unwrap();
            let b = random_channel(2, 2, seed + 19).unwrap();
            let report_sum = crate::skew::skew_info_channel(&s, &a).unwrap()
                + crate::skew::skew_info_channel(&s, &b).unwrap();
            for pairing in [Thm3Pairing::DoubleSumNormalized, Thm3Pairing::MatchedPairs] {
                let v = thm3_bound(&s, &a, &b, pairing, PermStrategy::Identity).unwrap();
                assert!((v - report_sum).abs() < 1e-9, "{v} vs {report_sum}");
            }
        }
    }

    #[test]
    fn thm3_descending_stays_valid_and_below_identity() {
        for seed in 0..10 {
            let s = random_state(3, seed).unwrap();
            let a = random_channel(3, 2, seed + 100).unwrap();
            let b = random_channel(3, 2, seed + 200).unwrap();
            let id = thm3_bound(
                &s,
                &a,
                &b,
                Thm3Pairing::DoubleSumNormalized,
                PermStrategy::Identity,
            )
            .unwrap();
            let desc = thm3_bound(
                &s,
                &a,
                &b,
                Thm3Pairing::DoubleSumNormalized,
                PermStrategy::Descending,
            )
            .unwrap();
            assert!(desc <= id + 1e-12);
            let matched = thm3_bound(
                &s,
                &a,
                &b,
                Thm3Pairing::MatchedPairs,
                PermStrategy::Descending,
            )
            .unwrap();
            let total = crate::skew::skew_info_channel(&s, &a).unwrap()
                + crate::skew::skew_info_channel(&s, &b).unwrap();
            assert!(desc <= total + 1e-9);
            assert!(matched <= total + 1e-9);
        }
    }

    #[test]
    fn thm3_exhaustive_small_matches_identity_at_qubit_scale() {
        let s = random_state(2, 77).unwrap();
        let a = random_channel(2, 1, 78).unwrap();
        let b = random_channel(2, 1, 79).unwrap();
        let exhaustive = thm3_bound(
            &s,
            &a,
            &b,
            Thm3Pairing::DoubleSumNormalized,
            PermStrategy::ExhaustiveSmall,
        )
        .unwrap();
        let identity = thm3_bound(
            &s,
            &a,
            &b,
            Thm3Pairing::DoubleSumNormalized,
            PermStrategy::Identity,
        )
        .unwrap();
        assert!((exhaustive - identity).abs() < 1e-12);

        let s3 = random_state(3, 80).unwrap();
        let a3 = random_channel(3, 1, 81).unwrap();
        let b3 = random_channel(3, 1, 82).unwrap();
        assert!(matches!(
            thm3_bound(
                &s3,
                &a3,
                &b3,
                Thm3Pairing::DoubleSumNormalized,
                PermStrategy::ExhaustiveSmall,
            ),
            Err(Error::TooLarge)
        ));
    }

    #[test]
    fn every_free_permutation_pair_yields_a_valid_bound_at_qubit_scale() {
        use itertools::Itertools;
        let s = random_state(2, 301).unwrap();
        let a = random_channel(2, 1, 302).unwrap();
        let b = random_channel(2, 1, 303).unwrap();
        let sum = crate::skew::skew_info_channel(&s, &a).unwrap()
            + crate::skew::skew_info_channel(&s, &b).unwrap();
        let x = tilde_mats(&s, &a).unwrap().remove(0);
        let y = tilde_mats(&s, &b).unwrap().remove(0);
        let m = vectorize(&x.add(&y).unwrap());
        let w = vectorize(&x.sub(&y).unwrap());
        for p1 in (0..4).permutations(4) {
            let perm1 = Permutation::new(p1).unwrap();
            let first = abs_pair_sum(&m, &m, &perm1).unwrap();
            for p2 in (0..4).permutations(4) {
                let perm2 = Permutation::new(p2).unwrap();
                let second = abs_pair_sum(&w, &w, &perm2).unwrap();
                let term = 0.25 * (first + second);
                assert!(term <= sum + 1e-9);
            }
        }
    }

    #[test]
    fn unitary_wrappers_check_their_inputs() {
        let s = ring_state(0.2);
        let (u, v) = rotation_unitaries();
        let uk = u.kraus()[0].clone();
        let vk = v.kraus()[0].clone();
        let product = unitary_product_bound(&s, &uk, &vk).unwrap();
        assert!((product - thm2_bound(&s, &u, &v).unwrap()).abs() < 1e-15);

        let saturating = unitary_sum_bound(&s, &uk, &vk, PermStrategy::Identity).unwrap();
        let ia = crate::skew::skew_info_channel(&s, &u).unwrap();
        let ib = crate::skew::skew_info_channel(&s, &v).unwrap();
        assert!((saturating - (ia + ib)).abs() < 1e-9);

        let not_unitary = pauli_x().scale(c(0.5, 0.0));
        assert!(matches!(
            unitary_product_bound(&s, &not_unitary, &vk),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn zhou_vanishes_when_one_channel_commutes_with_the_state() {
        // Diagonal state, diagonal channel: all tilde overlaps vanish.
        let s = state_from_bloch(BlochVector::new(0.0, 0.0, 0.5)).unwrap();
        let value = zhou_bound(&s, &phase_damping(0.5).unwrap(), &bit_flip(0.5).unwrap()).unwrap();
        assert!(value.abs() < 1e-14);
    }

    #[test]
    fn report_chain_and_validity_hold_on_random_instances() {
        for seed in 0..30 {
            let dim = 2 + (seed as usize % 3);
            let n = 1 + (seed as usize % 3);
            let s = random_state(dim, seed).unwrap();
            let a = random_channel(dim, n, seed.wrapping_add(1000)).unwrap();
            let b = random_channel(dim, n, seed.wrapping_add(2000)).unwrap();
            let report = evaluate_all(&s, &a, &b).unwrap();
            for (id, value) in &report.bounds {
                assert!(
                    *value <= report.uncertainty_for(*id) + 1e-9,
                    "{id} violates validity at seed {seed}"
                );
                assert!(*value >= -1e-12);
            }
            let zhou = report.value(BoundId::Zhou).unwrap();
            let proof = report.value(BoundId::Thm1Proof).unwrap();
            let thm2 = report.value(BoundId::Thm2).unwrap();
            assert!(proof >= zhou - 1e-12);
            assert!(thm2 >= proof - 1e-12);
        }
    }

    #[test]
    fn bound_id_strings_round_trip() {
        for id in BoundId::ALL {
            assert_eq!(BoundId::parse(id.as_str()).unwrap(), id);
        }
        assert!(BoundId::parse("nope").is_err());
    }

    #[test]
    fn mismatched_dimensions_are_rejected() {
        let s = random_state(3, 1).unwrap();
        let a = phase_damping(0.5).unwrap();
        let b = bit_flip(0.5).unwrap();
        assert!(matches!(
            evaluate_all(&s, &a, &b),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
