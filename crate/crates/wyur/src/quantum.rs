//! Validated quantum states and channels.
//!
//! [`DensityState`] checks Hermiticity, unit trace, and positivity on
//! construction and caches the principal square root of rho, which every
//! downstream quantity consumes. [`KrausChannel`] is an ordered operator
//! list; completeness is recorded but deliberately not enforced, so padded
//! or truncated operator lists can still be analyzed.
//!
//! The builtin example family lives here too: a Bloch-ring state family,
//! phase damping, bit flip, two fixed single-qubit rotations, and seeded
//! random states and channels for property campaigns.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{format_matrix, parse_complex, psd_sqrt, ComplexMatrix};
use crate::{Error, Result};

/// Kraus completeness threshold on the max-norm of sum K^H K - I.
const COMPLETENESS_TOL: f64 = 1e-8;
/// Eigenvalue clamp used when taking sqrt(rho).
const STATE_CLAMP_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    )
    .unwrap()
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
    )
    .unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::new(
        2,
        2,
        vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    )
    .unwrap()
}

/// Max-norm of M^H M - I; zero exactly for unitary M.
pub fn unitary_residual(m: &ComplexMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let gram = m.adjoint().matmul(m).unwrap();
    gram.max_abs_diff(&ComplexMatrix::identity(m.rows()))
        .unwrap()
}

/// A density matrix together with its cached principal square root.
#[derive(Debug, Clone)]
pub struct DensityState {
    dim: usize,
    rho: ComplexMatrix,
    sqrt_rho: ComplexMatrix,
}

impl DensityState {
    /// Validates rho (Hermitian within 1e-9, unit trace within 1e-9,
    /// eigenvalues above -1e-10) and caches sqrt(rho).
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let residual = rho.hermiticity_residual();
        if residual > 1e-9 {
            return Err(Error::NotHermitian { residual });
        }
        let trace = rho.trace();
        if (trace - c(1.0, 0.0)).norm() > 1e-9 {
            return Err(Error::TraceNotOne { trace });
        }
        let sqrt_rho = psd_sqrt(&rho, STATE_CLAMP_TOL)?;
        Ok(Self {
            dim: rho.rows(),
            rho,
            sqrt_rho,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn sqrt_rho(&self) -> &ComplexMatrix {
        &self.sqrt_rho
    }
}

/// The maximally mixed state I/d.
pub fn maximally_mixed(dim: usize) -> Result<DensityState> {
    if dim == 0 {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            detail: "dimension must be positive".into(),
        });
    }
    DensityState::new(ComplexMatrix::identity(dim).scale(c(1.0 / dim as f64, 0.0)))
}

/// An ordered list of Kraus operators sharing one dimension.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim: usize,
    kraus: Vec<ComplexMatrix>,
    label: String,
    complete: bool,
}

impl KrausChannel {
    /// Wraps an operator list. Completeness (sum K^H K = I within 1e-8) is
    /// measured and recorded, not required.
    pub fn new(kraus: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::ParamOutOfRange {
            name: "kraus",
            detail: "a channel needs at least one operator".into(),
        })?;
        if !first.is_square() {
            return Err(Error::DimensionMismatch(
                "Kraus operators must be square".into(),
            ));
        }
        let dim = first.rows();
        if kraus.iter().any(|k| k.rows() != dim || k.cols() != dim) {
            return Err(Error::DimensionMismatch(
                "all Kraus operators must share one dimension".into(),
            ));
        }
        let mut channel = Self {
            dim,
            kraus,
            label: label.into(),
            complete: false,
        };
        channel.complete = channel.completeness_residual() <= COMPLETENESS_TOL;
        Ok(channel)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.kraus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kraus.is_empty()
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Max-norm of sum K^H K - I.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc = acc.add(&k.adjoint().matmul(k).unwrap()).unwrap();
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
            .unwrap()
    }

    /// Applies the channel: sum K rho K^H.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "channel dimension {} vs state {}x{}",
                self.dim,
                rho.rows(),
                rho.cols()
            )));
        }
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc = acc.add(&k.matmul(rho)?.matmul(&k.adjoint())?)?;
        }
        Ok(acc)
    }
}

/// A point in or on the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }
}

/// Builds the qubit state (I + r . sigma) / 2.
pub fn state_from_bloch(r: BlochVector) -> Result<DensityState> {
    let norm_sq = r.rx * r.rx + r.ry * r.ry + r.rz * r.rz;
    if norm_sq > 1.0 + 1e-12 {
        return Err(Error::BlochNormExceeded {
            norm: norm_sq.sqrt(),
        });
    }
    let rho = ComplexMatrix::new(
        2,
        2,
        vec![
            c(0.5 * (1.0 + r.rz), 0.0),
            c(0.5 * r.rx, -0.5 * r.ry),
            c(0.5 * r.rx, 0.5 * r.ry),
            c(0.5 * (1.0 - r.rz), 0.0),
        ],
    )?;
    DensityState::new(rho)
}

/// The builtin mixed-state family: a Bloch vector of fixed length sqrt(13)/4
/// riding a horizontal ring, r = (sqrt(3)/2 cos t, sqrt(3)/2 sin t, 1/4).
///
/// Its spectrum is independent of the angle, which makes it a convenient
/// family for sweeps: only the eigenbasis moves.
pub fn ring_state(theta: f64) -> DensityState {
    let r = BlochVector::new(
        3.0f64.sqrt() / 2.0 * theta.cos(),
        3.0f64.sqrt() / 2.0 * theta.sin(),
        0.25,
    );
    state_from_bloch(r).expect("ring state radius is below 1")
}

/// Phase damping with rate q: L1 = diag(1, sqrt(1-q)), L2 = diag(0, sqrt(q)).
pub fn phase_damping(q: f64) -> Result<KrausChannel> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            detail: format!("phase damping needs 0 <= q < 1, got {q}"),
        });
    }
    let l1 = ComplexMatrix::new(
        2,
        2,
        vec![
            c(1.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c((1.0 - q).sqrt(), 0.0),
        ],
    )?;
    let l2 = ComplexMatrix::new(
        2,
        2,
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(q.sqrt(), 0.0)],
    )?;
    KrausChannel::new(vec![l1, l2], format!("phase_damping({q})"))
}

/// Bit flip with rate q: K1 = sqrt(q) I, K2 = sqrt(1-q) sigma_x.
pub fn bit_flip(q: f64) -> Result<KrausChannel> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::ParamOutOfRange {
            name: "q",
            detail: format!("bit flip needs 0 <= q < 1, got {q}"),
        });
    }
    let k1 = ComplexMatrix::identity(2).scale(c(q.sqrt(), 0.0));
    let k2 = pauli_x().scale(c((1.0 - q).sqrt(), 0.0));
    KrausChannel::new(vec![k1, k2], format!("bit_flip({q})"))
}

/// The two fixed rotations used by the builtin sweeps, each wrapped as a
/// single-operator channel: a y-rotation and a z-rotation by pi/8,
/// U = [[cos pi/8, sin pi/8], [-sin pi/8, cos pi/8]] and
/// V = diag(e^{i pi/8}, e^{-i pi/8}).
pub fn rotation_unitaries() -> (KrausChannel, KrausChannel) {
    let (cos, sin) = (
        std::f64::consts::FRAC_PI_8.cos(),
        std::f64::consts::FRAC_PI_8.sin(),
    );
    let u = ComplexMatrix::new(
        2,
        2,
        vec![c(cos, 0.0), c(sin, 0.0), c(-sin, 0.0), c(cos, 0.0)],
    )
    .unwrap();
    let v = ComplexMatrix::new(
        2,
        2,
        vec![c(cos, sin), c(0.0, 0.0), c(0.0, 0.0), c(cos, -sin)],
    )
    .unwrap();
    (
        KrausChannel::new(vec![u], "rot_y_pi8").unwrap(),
        KrausChannel::new(vec![v], "rot_z_pi8").unwrap(),
    )
}

fn complex_gaussian(rng: &mut ChaCha12Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        entries.push(c(re, im));
    }
    ComplexMatrix::new(rows, cols, entries).unwrap()
}

/// Seeded random density matrix: G G^H / tr(G G^H) for a complex Gaussian G
/// drawn from a ChaCha12 stream. Identical seeds give identical states.
pub fn random_state(dim: usize, seed: u64) -> Result<DensityState> {
    if dim < 2 {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            detail: format!("random states need dim >= 2, got {dim}"),
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = complex_gaussian(&mut rng, dim, dim);
    let gram = g.matmul(&g.adjoint())?;
    let trace = gram.trace().re;
    DensityState::new(gram.scale(c(1.0 / trace, 0.0)))
}

/// Seeded random channel: Gram-Schmidt turns a (dim * n_kraus) x dim complex
/// Gaussian into an isometry, whose dim x dim row blocks are the Kraus
/// operators. Completeness then holds by construction.
pub fn random_channel(dim: usize, n_kraus: usize, seed: u64) -> Result<KrausChannel> {
    if dim < 2 {
        return Err(Error::ParamOutOfRange {
            name: "dim",
            detail: format!("random channels need dim >= 2, got {dim}"),
        });
    }
    if n_kraus < 1 {
        return Err(Error::ParamOutOfRange {
            name: "n_kraus",
            detail: "random channels need at least one operator".into(),
        });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let rows = dim * n_kraus;
    let g = complex_gaussian(&mut rng, rows, dim);

    // Modified Gram-Schmidt, with one re-orthogonalization pass.
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|j| (0..rows).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..dim {
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let basis = &done[k];
                let current = &mut rest[0];
                let proj: Complex64 = basis
                    .iter()
                    .zip(current.iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                for (slot, b) in current.iter_mut().zip(basis) {
                    *slot -= proj * b;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }

    let mut kraus = Vec::with_capacity(n_kraus);
    for block in 0..n_kraus {
        let mut op = ComplexMatrix::zeros(dim, dim);
        for (j, col) in cols.iter().enumerate() {
            for i in 0..dim {
                op.set(i, j, col[block * dim + i]);
            }
        }
        kraus.push(op);
    }
    KrausChannel::new(kraus, format!("random({dim},{n_kraus};seed={seed})"))
}

/// Zero-pads the shorter operator list so both channels have the same
/// length; the channel action is unchanged.
pub fn pad_kraus(a: &KrausChannel, b: &KrausChannel) -> Result<(KrausChannel, KrausChannel)> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cannot pad channels of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let n = a.len().max(b.len());
    let pad = |ch: &KrausChannel| -> Result<KrausChannel> {
        if ch.len() == n {
            return Ok(ch.clone());
        }
        let mut ops = ch.kraus().to_vec();
        ops.resize(n, ComplexMatrix::zeros(ch.dim(), ch.dim()));
        KrausChannel::new(ops, ch.label())
    };
    Ok((pad(a)?, pad(b)?))
}

/// Writes a channel as "d n" followed by each operator in the matrix text
/// format.
pub fn format_channel(ch: &KrausChannel) -> String {
    let mut out = format!("{} {}\n", ch.dim(), ch.len());
    for k in ch.kraus() {
        out.push_str(&format_matrix(k));
    }
    out
}

/// Parses the channel text format produced by [`format_channel`].
pub fn parse_channel(text: &str, label: impl Into<String>) -> Result<KrausChannel> {
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| -> Result<&str> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("channel text ended early, expected {what}")))
    };
    let dim: usize = next("dimension")?
        .parse()
        .map_err(|_| Error::Parse("invalid channel dimension".into()))?;
    let n: usize = next("operator count")?
        .parse()
        .map_err(|_| Error::Parse("invalid operator count".into()))?;
    if dim == 0 || n == 0 {
        return Err(Error::Parse("channel dimensions must be positive".into()));
    }
    let mut kraus = Vec::with_capacity(n);
    for _ in 0..n {
        let rows: usize = next("block rows")?
            .parse()
            .map_err(|_| Error::Parse("invalid block rows".into()))?;
        let cols: usize = next("block cols")?
            .parse()
            .map_err(|_| Error::Parse("invalid block cols".into()))?;
        if rows != dim || cols != dim {
            return Err(Error::Parse(format!(
                "operator block is {rows}x{cols}, expected {dim}x{dim}"
            )));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for _ in 0..dim * dim {
            entries.push(parse_complex(next("matrix entry")?)?);
        }
        kraus.push(ComplexMatrix::new(dim, dim, entries)?);
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing tokens after channel body".into()));
    }
    KrausChannel::new(kraus, label)
}

/// Resolves a builtin channel name: "phase_damping(q)", "bit_flip(q)",
/// "rot_y_pi8", or "rot_z_pi8".
pub fn channel_from_name(name: &str) -> Result<KrausChannel> {
    let name = name.trim();
    if name == "rot_y_pi8" {
        return Ok(rotation_unitaries().0);
    }
    if name == "rot_z_pi8" {
        return Ok(rotation_unitaries().1);
    }
    for (prefix, build) in [
        (
            "phase_damping(",
            phase_damping as fn(f64) -> Result<KrausChannel>,
        ),
        ("bit_flip(", bit_flip as fn(f64) -> Result<KrausChannel>),
    ] {
        if let Some(rest) = name.strip_prefix(prefix) {
            let inner = rest
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing `)` in channel name `{name}`")))?;
            let q: f64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid parameter in `{name}`")))?;
            return build(q);
        }
    }
    Err(Error::Parse(format!(
        "unknown channel name `{name}`; builtins are phase_damping(q), bit_flip(q), rot_y_pi8, rot_z_pi8"
    )))
}
