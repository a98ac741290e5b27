//! The two-generator embedding: coding words `V_i` over `h1, h2`, their
//! small-cancellation check, the presentations `G1`, `G2` and the rewritten
//! presentation over `h1, h2`, and the symbolic transport of solutions.

mod build;
mod small_cancellation;
mod transport;
mod vwords;

use serde::Serialize;
use thiserror::Error;

use crate::groups::{GroupBackend, Presentation, PresentationError, TableError};
use crate::quadratic::{
    enumerate_solvable, solve, verify_solution, QuadraticEquation, QuadraticError, SolutionTuple, Verdict,
};

pub use build::{
    build_g1, build_g2, encode, global_variable, globalize, local_variable, mu_n, rewrite_to_two_generators, v_index,
    TwoGeneratorPresentation,
};
pub use small_cancellation::{check_small_cancellation, small_cancellation_sweep, SmallCancellationReport};
pub use transport::{
    retract_psi_infinity, transport_solution, verify_transport, GroupValue, Transport, TransportSummary,
};
pub use vwords::{block_exponents, v_word, v_word_length, v_word_stats, VWordStats, MIN_M};

/// `3 * 24^2`.
pub const C: u64 = 1728;

pub const DEFAULT_HORIZON: u64 = 10;

pub fn m_for(n: u32) -> u64 {
    24 * n as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("n must be even and at least 2, got {0}")]
    BadN(u32),
    #[error("V_{i} needs i >= 1 and M >= 48 (got M = {m})")]
    VWord { i: u64, m: u64 },
    #[error("V_{i} and V_{j} share a long subword at M = {m}")]
    SmallCancellation { i: u64, j: u64, m: u64 },
    #[error("equation {equation} has |W|_X = {x_length} or a variable index beyond n = {n}")]
    VariableOverflow { equation: usize, x_length: usize, n: u32 },
    #[error("{0}")]
    BaseRelators(String),
    #[error("relator {0} encodes to the empty word")]
    TrivialRelator(usize),
    #[error("coding relator {0} does not encode to the empty word")]
    CodingRelator(usize),
    #[error("equation indices start at 1, got {0}")]
    EquationIndex(usize),
    #[error("bounds overflow for n = {n}, i = {i}")]
    Overflow { n: u32, i: usize },
    #[error("global variable x{k} exceeds n*i for n = {n}, i = {i}")]
    IndexBeyondBound { k: u32, n: u32, i: usize },
    #[error("equation {equation}: transported length {length}, bounds {proof_bound} <= {theorem_bound} violated")]
    BoundViolated {
        equation: usize,
        length: u64,
        proof_bound: u64,
        theorem_bound: u64,
    },
    #[error("tuple for equation {equation} assigns {found:?}, expected {expected:?}")]
    TupleMismatch {
        equation: usize,
        expected: Vec<u32>,
        found: Vec<u32>,
    },
    #[error("no relator for equation {0}")]
    MissingRelator(usize),
    #[error("transported solution of equation {0} does not reduce to its relator")]
    TransportFailed(usize),
    #[error("no stored solution covers x{0}")]
    Uncovered(u32),
    #[error("retraction: {0}")]
    Retraction(String),
    #[error("retraction does not kill relator {0} of G1")]
    RetractionFailed(usize),
    #[error("backend returned no solution for enumerated equation {0}")]
    MissingSolution(usize),
    #[error(transparent)]
    Quadratic(#[from] QuadraticError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingParams {
    pub n: u32,
    pub m: u64,
    /// Number of enumerated equations.
    pub count: usize,
    /// Enumeration length cap.
    pub cap: usize,
    /// Largest index in the small-cancellation sweep run before building.
    pub horizon: u64,
}

impl EmbeddingParams {
    pub fn new(n: u32, count: usize, cap: usize) -> Result<EmbeddingParams, EmbeddingError> {
        if n < 2 || n % 2 == 1 {
            return Err(EmbeddingError::BadN(n));
        }
        Ok(EmbeddingParams {
            n,
            m: m_for(n),
            count,
            cap,
            horizon: DEFAULT_HORIZON,
        })
    }

    pub fn with_horizon(mut self, horizon: u64) -> EmbeddingParams {
        self.horizon = horizon;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddingOutput {
    pub params: EmbeddingParams,
    pub equations: Vec<QuadraticEquation>,
    /// One tuple per equation; absent for the oracle backend.
    pub solutions_g: Option<Vec<SolutionTuple>>,
    pub g1: Presentation,
    pub g2: Presentation,
    pub prh: TwoGeneratorPresentation,
    pub transports: Vec<TransportSummary>,
    pub small_cancellation_pairs: usize,
}

/// Runs the whole construction for the first `params.count` solvable
/// equations of the backend group with presentation `base`, checking every
/// step: the small-cancellation sweep, the base relators against the
/// backend, every solution in the base group, every transported solution,
/// and (when solutions are known) that the retraction kills `G1`.
pub fn build_embedding(
    backend: &GroupBackend,
    base: &Presentation,
    params: &EmbeddingParams,
) -> Result<EmbeddingOutput, EmbeddingError> {
    let n = params.n;
    let reports = small_cancellation_sweep(params.m, params.horizon)?;
    if let Some(r) = reports.iter().find(|r| !r.passes()) {
        return Err(EmbeddingError::SmallCancellation { i: r.i, j: r.j, m: r.m });
    }

    match backend {
        GroupBackend::FiniteTable(table) => {
            if base.a_count() != table.a_count() {
                return Err(EmbeddingError::BaseRelators(format!(
                    "presentation has {} generators, table has {}",
                    base.a_count(),
                    table.a_count()
                )));
            }
            if !table.satisfies(base)? {
                return Err(EmbeddingError::BaseRelators(
                    "a presentation relator does not hold in the table".into(),
                ));
            }
        }
        GroupBackend::FreeGroup { rank, .. } => {
            if base.a_count() != *rank || !base.relators().is_empty() {
                return Err(EmbeddingError::BaseRelators(format!(
                    "a free group of rank {rank} is presented by {rank} generators and no relators"
                )));
            }
        }
        GroupBackend::OracleList(_) => {}
    }

    let equations = enumerate_solvable(backend, n, params.cap, params.count)?;
    let solutions_g = match backend {
        GroupBackend::OracleList(_) => None,
        _ => Some(
            equations
                .iter()
                .enumerate()
                .map(|(pos, eq)| match solve(eq, backend)? {
                    Verdict::Solved(t) if verify_solution(eq, &t, backend)? => Ok(t),
                    _ => Err(EmbeddingError::MissingSolution(pos + 1)),
                })
                .collect::<Result<Vec<_>, _>>()?,
        ),
    };

    let g1 = build_g1(base, &equations, n)?;
    let g2 = build_g2(&g1, n)?;
    let prh = rewrite_to_two_generators(&g2, n)?;
    if prh.equation_count() != equations.len() {
        return Err(EmbeddingError::BaseRelators(
            "relator count of the two-generator presentation is inconsistent".into(),
        ));
    }

    let mut transports = Vec::with_capacity(equations.len());
    for (pos, eq) in equations.iter().enumerate() {
        let t = transport_solution(pos + 1, eq, n)?;
        if !verify_transport(pos + 1, eq, &t.tuple, &prh)? {
            return Err(EmbeddingError::TransportFailed(pos + 1));
        }
        transports.push(t.summary);
    }

    if let Some(solutions) = &solutions_g {
        for (pos, r) in g1.relators().iter().enumerate() {
            if !retract_psi_infinity(r, solutions, n, backend)?.is_identity(backend) {
                return Err(EmbeddingError::RetractionFailed(pos + 1));
            }
        }
    }

    Ok(EmbeddingOutput {
        params: params.clone(),
        equations,
        solutions_g,
        g1,
        g2,
        prh,
        transports,
        small_cancellation_pairs: reports.len(),
    })
}
