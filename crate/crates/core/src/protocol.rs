//! The online multiplication protocol: partition the inputs, mask them into
//! polynomial shares, pick evaluation points, evaluate at every server, and
//! decode the product from the answers.
//!
//! The offline half lives in [`PrecomputeBundle`]: the mask-mask products
//! depend on neither input matrix, so their evaluations can be prepared
//! before the inputs exist and subtracted from the answers afterwards. Only
//! the exponents appearing in the information-times-anything terms then need
//! to be solved for, which is what shrinks the server count.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::audit::{mask_rank_check, SubsetCheckSummary};
use crate::degree_table::{support_decomposition, GaspExponents};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::matrix::FieldMatrix;
use crate::poly::SparsePoly;
use crate::solve::{gen_vandermonde_solve, power_matrix_invertible};

/// Attempt budget for evaluation-point selection before giving up.
pub const DEFAULT_MAX_ATTEMPTS: u32 = 100;

/// `A` cut into K row blocks and `B` into L column blocks.
#[derive(Debug, Clone)]
pub struct PartitionedMatrices {
    a_blocks: Vec<FieldMatrix>,
    b_blocks: Vec<FieldMatrix>,
}

impl PartitionedMatrices {
    #[inline]
    pub fn a_blocks(&self) -> &[FieldMatrix] {
        &self.a_blocks
    }

    #[inline]
    pub fn b_blocks(&self) -> &[FieldMatrix] {
        &self.b_blocks
    }
}

pub fn partition(
    a: &FieldMatrix,
    b: &FieldMatrix,
    k: usize,
    l: usize,
) -> Result<PartitionedMatrices> {
    if a.field().modulus() != b.field().modulus() {
        return Err(Error::FieldMismatch(
            a.field().modulus(),
            b.field().modulus(),
        ));
    }
    if k == 0 || l == 0 {
        return Err(Error::PartitionError(
            "K and L must be at least 1".into(),
        ));
    }
    if a.rows() == 0 || a.cols() == 0 || b.cols() == 0 {
        return Err(Error::PartitionError("matrices must be nonempty".into()));
    }
    if a.cols() != b.rows() {
        return Err(Error::PartitionError(format!(
            "inner dimensions differ: A is {}x{}, B is {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !a.rows().is_multiple_of(k) {
        return Err(Error::PartitionError(format!(
            "K = {k} does not divide the {} rows of A",
            a.rows()
        )));
    }
    if !b.cols().is_multiple_of(l) {
        return Err(Error::PartitionError(format!(
            "L = {l} does not divide the {} columns of B",
            b.cols()
        )));
    }
    let br = a.rows() / k;
    let bc = b.cols() / l;
    let a_blocks = (0..k)
        .map(|i| a.submatrix(i * br, 0, br, a.cols()))
        .collect::<Result<Vec<_>>>()?;
    let b_blocks = (0..l)
        .map(|j| b.submatrix(0, j * bc, b.rows(), bc))
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionedMatrices { a_blocks, b_blocks })
}

/// The two share polynomials together with the mask blocks that built them.
/// The masks are kept so the offline bundle can be formed; they never leave
/// the user.
#[derive(Debug, Clone)]
pub struct EncodingState {
    f: SparsePoly,
    g: SparsePoly,
    r_blocks: Vec<FieldMatrix>,
    s_blocks: Vec<FieldMatrix>,
}

impl EncodingState {
    #[inline]
    pub fn f(&self) -> &SparsePoly {
        &self.f
    }

    #[inline]
    pub fn g(&self) -> &SparsePoly {
        &self.g
    }

    #[inline]
    pub fn r_blocks(&self) -> &[FieldMatrix] {
        &self.r_blocks
    }

    #[inline]
    pub fn s_blocks(&self) -> &[FieldMatrix] {
        &self.s_blocks
    }

    /// Shape of one block of the product `A * B`.
    #[inline]
    pub fn block_shape(&self) -> (usize, usize) {
        (self.f.coeff_rows(), self.g.coeff_cols())
    }
}

fn random_nonzero_matrix<R: RngCore>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> FieldMatrix {
    loop {
        let m = FieldMatrix::random(field, rows, cols, rng);
        // an all-zero mask would leave its side of the table unprotected
        if !m.is_zero() {
            return m;
        }
    }
}

pub fn encode(pm: &PartitionedMatrices, exps: &GaspExponents, seed: u64) -> Result<EncodingState> {
    if pm.a_blocks.len() != exps.k() || pm.b_blocks.len() != exps.l() {
        return Err(Error::PartitionError(format!(
            "got {} x {} blocks for a table expecting {} x {}",
            pm.a_blocks.len(),
            pm.b_blocks.len(),
            exps.k(),
            exps.l()
        )));
    }
    let field = pm.a_blocks[0].field();
    let (br, inner) = (pm.a_blocks[0].rows(), pm.a_blocks[0].cols());
    let bc = pm.b_blocks[0].cols();
    let t = exps.t();

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let r_blocks: Vec<FieldMatrix> = (0..t)
        .map(|_| random_nonzero_matrix(field, br, inner, &mut rng))
        .collect();
    let s_blocks: Vec<FieldMatrix> = (0..t)
        .map(|_| random_nonzero_matrix(field, inner, bc, &mut rng))
        .collect();

    let mut f = SparsePoly::new(field, br, inner);
    for (i, block) in pm.a_blocks.iter().enumerate() {
        f.add_term(exps.alpha_i()[i], block.clone())?;
    }
    for (u, block) in r_blocks.iter().enumerate() {
        f.add_term(exps.alpha_r()[u], block.clone())?;
    }
    let mut g = SparsePoly::new(field, inner, bc);
    for (j, block) in pm.b_blocks.iter().enumerate() {
        g.add_term(exps.beta_i()[j], block.clone())?;
    }
    for (v, block) in s_blocks.iter().enumerate() {
        g.add_term(exps.beta_r()[v], block.clone())?;
    }
    Ok(EncodingState {
        f,
        g,
        r_blocks,
        s_blocks,
    })
}

/// A fixed choice of field, exponents, and evaluation points, with the
/// decoding bookkeeping precomputed.
#[derive(Debug, Clone)]
pub struct SchemeInstance {
    field: PrimeField,
    exponents: GaspExponents,
    points: Vec<FieldElement>,
    decoding_exponents: Vec<u64>,
    red_positions: Vec<Vec<usize>>,
    subset_check: Option<SubsetCheckSummary>,
}

impl SchemeInstance {
    /// Wraps externally chosen points without any invertibility screening.
    /// Counts and fields must line up; everything else, including duplicate
    /// or otherwise degenerate points, is accepted so that the audits have
    /// broken instances to exercise.
    pub fn from_parts(exponents: GaspExponents, points: Vec<FieldElement>) -> Result<Self> {
        let decoding_exponents = support_decomposition(&exponents).pre_support();
        if points.is_empty() {
            return Err(Error::EmptySet);
        }
        if points.len() != decoding_exponents.len() {
            return Err(Error::InvalidParameters(format!(
                "this table needs {} evaluation points, got {}",
                decoding_exponents.len(),
                points.len()
            )));
        }
        let field = points[0].field();
        if let Some(p) = points.iter().find(|p| p.field().modulus() != field.modulus()) {
            return Err(Error::FieldMismatch(field.modulus(), p.field().modulus()));
        }
        let red_positions = red_positions(&exponents, &decoding_exponents);
        Ok(SchemeInstance {
            field,
            exponents,
            points,
            decoding_exponents,
            red_positions,
            subset_check: None,
        })
    }

    /// Samples evaluation points until the decoding system and every mask
    /// power submatrix are invertible.
    ///
    /// Failures that no amount of resampling can fix are reported as
    /// [`Error::InvalidParameters`]: a field with fewer than `N` nonzero
    /// elements, or two decoding exponents congruent modulo `q - 1` (the
    /// nonzero elements satisfy `x^(q-1) = 1`, so such a pair yields equal
    /// matrix columns at every possible point choice). Exhausting the
    /// attempt budget yields [`Error::PointSelectionFailed`].
    pub fn choose_points(
        field: PrimeField,
        exponents: &GaspExponents,
        seed: u64,
        max_attempts: u32,
    ) -> Result<Self> {
        let decoding_exponents = support_decomposition(exponents).pre_support();
        let n = decoding_exponents.len();
        let q = field.modulus();
        if ((q - 1) as u128) < n as u128 {
            return Err(Error::InvalidParameters(format!(
                "field of size {q} has fewer than {n} distinct nonzero points"
            )));
        }
        let group_order = q - 1;
        let mut residues: Vec<u64> = decoding_exponents.iter().map(|e| e % group_order).collect();
        residues.sort_unstable();
        if residues.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameters(format!(
                "two decoding exponents are congruent modulo q - 1 = {group_order}, \
                 so the decoding system is singular for every point choice"
            )));
        }

        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        for _ in 0..max_attempts {
            let mut chosen = std::collections::BTreeSet::new();
            while chosen.len() < n {
                let candidate = field.sample(&mut rng);
                if !candidate.is_zero() {
                    chosen.insert(candidate.value());
                }
            }
            let points: Vec<FieldElement> = chosen.into_iter().map(|v| field.element(v)).collect();
            if !power_matrix_invertible(&decoding_exponents, &points) {
                continue;
            }
            let summary = mask_rank_check(exponents, &points, rng.next_u64(), 8);
            if summary.all_invertible() {
                let red_positions = red_positions(exponents, &decoding_exponents);
                return Ok(SchemeInstance {
                    field,
                    exponents: exponents.clone(),
                    points,
                    decoding_exponents,
                    red_positions,
                    subset_check: Some(summary),
                });
            }
        }
        Err(Error::PointSelectionFailed {
            attempts: max_attempts,
        })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn exponents(&self) -> &GaspExponents {
        &self.exponents
    }

    #[inline]
    pub fn points(&self) -> &[FieldElement] {
        &self.points
    }

    /// Sorted union of the exponents a corrected answer can contain; one
    /// unknown coefficient per entry, one server per unknown.
    #[inline]
    pub fn decoding_exponents(&self) -> &[u64] {
        &self.decoding_exponents
    }

    #[inline]
    pub fn servers(&self) -> usize {
        self.points.len()
    }

    /// The mask-rank screening performed when the points were chosen, absent
    /// for instances assembled via [`SchemeInstance::from_parts`].
    #[inline]
    pub fn subset_check(&self) -> Option<&SubsetCheckSummary> {
        self.subset_check.as_ref()
    }
}

/// Index of each information product's exponent in the decoding plan. The
/// sums `alpha_I[i] + beta_I[j]` always appear in the plan; whether each
/// holds a clean product is exactly table condition (i).
fn red_positions(exps: &GaspExponents, decoding_exponents: &[u64]) -> Vec<Vec<usize>> {
    exps.alpha_i()
        .iter()
        .map(|&a| {
            exps.beta_i()
                .iter()
                .map(|&b| {
                    decoding_exponents
                        .binary_search(&(a + b))
                        .expect("information sums are part of the support union")
                })
                .collect()
        })
        .collect()
}

/// Evaluations of the mask-mask part of `f * g` at every server's point,
/// computed offline. Depends on the mask blocks, the exponents, and the
/// points, never on the input matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecomputeBundle {
    values: Vec<FieldMatrix>,
}

impl PrecomputeBundle {
    pub fn build(
        instance: &SchemeInstance,
        r_blocks: &[FieldMatrix],
        s_blocks: &[FieldMatrix],
        block_shape: (usize, usize),
    ) -> Result<Self> {
        let exps = instance.exponents();
        let t = exps.t();
        if r_blocks.len() != t || s_blocks.len() != t {
            return Err(Error::InvalidParameters(format!(
                "expected {t} mask blocks per side, got {} and {}",
                r_blocks.len(),
                s_blocks.len()
            )));
        }
        let field = instance.field();
        let (rows, cols) = block_shape;
        let mut products = Vec::with_capacity(t * t);
        for r in r_blocks {
            for s in s_blocks {
                let p = r.mul(s)?;
                if p.rows() != rows || p.cols() != cols || p.field().modulus() != field.modulus() {
                    return Err(Error::DimensionMismatch(format!(
                        "mask product is {}x{}, expected {rows}x{cols}",
                        p.rows(),
                        p.cols()
                    )));
                }
                products.push(p);
            }
        }
        let values = instance
            .points()
            .iter()
            .map(|&point| {
                let mut acc = FieldMatrix::zeros(field, rows, cols);
                for (u, &ar) in exps.alpha_r().iter().enumerate() {
                    for (v, &br) in exps.beta_r().iter().enumerate() {
                        let w = point.pow(ar + br);
                        acc = acc.add(&products[u * t + v].scalar_mul(w))?;
                    }
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PrecomputeBundle { values })
    }

    #[inline]
    pub fn values(&self) -> &[FieldMatrix] {
        &self.values
    }
}

/// Everything one server receives and returns.
#[derive(Debug, Clone)]
pub struct ServerView {
    pub point: FieldElement,
    pub f_share: FieldMatrix,
    pub g_share: FieldMatrix,
    pub product: FieldMatrix,
}

/// Evaluates both shares at every server's point and forms the per-server
/// products, in point order.
pub fn server_compute(encoding: &EncodingState, instance: &SchemeInstance) -> Result<Vec<ServerView>> {
    if encoding.f.field().modulus() != instance.field().modulus() {
        return Err(Error::FieldMismatch(
            encoding.f.field().modulus(),
            instance.field().modulus(),
        ));
    }
    instance
        .points
        .par_iter()
        .map(|&point| {
            let f_share = encoding.f.eval(point)?;
            let g_share = encoding.g.eval(point)?;
            let product = f_share.mul(&g_share)?;
            Ok(ServerView {
                point,
                f_share,
                g_share,
                product,
            })
        })
        .collect()
}

/// Subtracts the offline bundle from the answers, solves for the corrected
/// coefficients, and assembles the product from the information positions.
pub fn decode(
    answers: &[FieldMatrix],
    bundle: &PrecomputeBundle,
    instance: &SchemeInstance,
) -> Result<FieldMatrix> {
    let n = instance.points.len();
    if answers.len() != n {
        return Err(Error::InvalidParameters(format!(
            "need an answer from every one of the {n} servers, got {}",
            answers.len()
        )));
    }
    if bundle.values.len() != n {
        return Err(Error::InvalidParameters(format!(
            "bundle covers {} servers, instance has {n}",
            bundle.values.len()
        )));
    }
    let corrected = answers
        .iter()
        .zip(&bundle.values)
        .map(|(answer, offline)| answer.sub(offline))
        .collect::<Result<Vec<_>>>()?;
    let coeffs = gen_vandermonde_solve(&instance.decoding_exponents, &instance.points, &corrected)?;
    let blocks: Vec<Vec<FieldMatrix>> = instance
        .red_positions
        .iter()
        .map(|row| row.iter().map(|&p| coeffs[p].clone()).collect())
        .collect();
    FieldMatrix::from_blocks(&blocks)
}

/// Field elements moved per party, counted for one multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranscriptSummary {
    pub servers: u64,
    /// One f share plus one g share.
    pub upload_per_server: u64,
    /// One product block.
    pub download_per_server: u64,
    /// Offline bundle entries across all servers.
    pub precomputed_elements: u64,
}

pub fn transcript_summary(
    instance: &SchemeInstance,
    a_dims: (usize, usize),
    b_dims: (usize, usize),
) -> TranscriptSummary {
    let k = instance.exponents.k();
    let l = instance.exponents.l();
    let servers = instance.points.len() as u64;
    let f_share = (a_dims.0 / k) as u64 * a_dims.1 as u64;
    let g_share = b_dims.0 as u64 * (b_dims.1 / l) as u64;
    let block = (a_dims.0 / k) as u64 * (b_dims.1 / l) as u64;
    TranscriptSummary {
        servers,
        upload_per_server: f_share + g_share,
        download_per_server: block,
        precomputed_elements: servers * block,
    }
}

/// One full multiplication, all stages wired together.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub product: FieldMatrix,
    pub instance: SchemeInstance,
    pub transcript: TranscriptSummary,
}

/// Runs partition, encode, point selection, every server's evaluation, and
/// decoding. Masking uses `seed` and point selection `seed + 1`, so a fixed
/// seed reproduces the run exactly.
pub fn run_protocol(
    a: &FieldMatrix,
    b: &FieldMatrix,
    exponents: &GaspExponents,
    seed: u64,
    max_attempts: u32,
) -> Result<ProtocolRun> {
    let pm = partition(a, b, exponents.k(), exponents.l())?;
    let encoding = encode(&pm, exponents, seed)?;
    let instance =
        SchemeInstance::choose_points(a.field(), exponents, seed.wrapping_add(1), max_attempts)?;
    let bundle = PrecomputeBundle::build(
        &instance,
        encoding.r_blocks(),
        encoding.s_blocks(),
        encoding.block_shape(),
    )?;
    let views = server_compute(&encoding, &instance)?;
    let answers: Vec<FieldMatrix> = views.into_iter().map(|v| v.product).collect();
    let product = decode(&answers, &bundle, &instance)?;
    let transcript = transcript_summary(&instance, (a.rows(), a.cols()), (b.rows(), b.cols()));
    Ok(ProtocolRun {
        product,
        instance,
        transcript,
    })
}
