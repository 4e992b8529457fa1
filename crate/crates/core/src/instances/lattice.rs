use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::evs::{Evs, SetKind};
use crate::rng::CheckRng;
use crate::scalar::{ExactField, FieldMode, ScalarMode};
use crate::{Rational, Scalar};

/// Reduced row-echelon form of `rows`, zero rows dropped.
fn rref(mut rows: Vec<Vec<Rational>>, n: usize) -> Vec<Vec<Rational>> {
    let mut pivot_row = 0;
    for col in 0..n {
        let Some(found) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, found);
        let p = rows[pivot_row][col].clone();
        for v in rows[pivot_row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot = rows[pivot_row].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// A subspace of `Fⁿ` stored by its reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { n, rows: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        Subspace { n, rows }
    }

    /// The span of `vectors`, in canonical form.
    pub fn span(n: usize, vectors: &[Vec<Rational>]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == n), "vector length must equal the ambient dimension");
        Subspace { n, rows: rref(vectors.to_vec(), n) }
    }

    /// The line through `(p, q)` in the plane.
    pub fn line(p: Rational, q: Rational) -> Self {
        Self::span(2, &[vec![p, q]])
    }

    /// Rows taken verbatim, skipping canonicalisation. Only for fault injection.
    pub fn from_rows_unchecked(n: usize, rows: Vec<Vec<Rational>>) -> Self {
        Subspace { n, rows }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        rref(self.rows.clone(), self.n).len()
    }

    pub fn is_canonical(&self) -> bool {
        rref(self.rows.clone(), self.n) == self.rows
    }

    /// `span(self ∪ other)`.
    pub fn join(&self, other: &Subspace) -> Subspace {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::span(self.n, &all)
    }

    /// `other ⊆ self`, decided by rank.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.join(other).dim() == self.dim()
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |r: &Vec<Rational>| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        if self.rows.is_empty() {
            f.write_str("zero")
        } else if self.is_canonical() && self.rows.len() == self.n {
            f.write_str("full")
        } else if self.rows.len() == 1 {
            write!(f, "span({})", row(&self.rows[0]))
        } else {
            let parts: Vec<String> = self.rows.iter().map(|r| format!("({})", row(r))).collect();
            write!(f, "span({})", parts.join(","))
        }
    }
}

/// Subspaces of `F²` with join as addition and `αY = Y` for `α ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceLattice {
    field: FieldMode,
}

impl SubspaceLattice {
    pub const DIM: usize = 2;

    pub fn new() -> Self {
        SubspaceLattice { field: FieldMode::Complex }
    }

    pub fn with_field(field: FieldMode) -> Self {
        SubspaceLattice { field }
    }
}

impl Default for SubspaceLattice {
    fn default() -> Self {
        Self::new()
    }
}

/// A random line of the plane with small integer direction.
pub(crate) fn random_line(rng: &mut CheckRng) -> Subspace {
    loop {
        let p = rng.random_range(-4..=4);
        let q = rng.random_range(-4..=4);
        if p != 0 || q != 0 {
            return Subspace::line(Rational::from_int(p), Rational::from_int(q));
        }
    }
}

impl Evs for SubspaceLattice {
    type Elem = Subspace;

    fn name(&self) -> String {
        "lattice2".into()
    }

    fn field_mode(&self) -> FieldMode {
        self.field
    }

    fn scalar_mode(&self) -> ScalarMode {
        ScalarMode::AnyScalar
    }

    fn zero(&self) -> Subspace {
        Subspace::zero(Self::DIM)
    }

    fn add(&self, x: &Subspace, y: &Subspace) -> Subspace {
        x.join(y)
    }

    fn scale(&self, s: &Scalar, x: &Subspace) -> Subspace {
        if s.is_zero() {
            self.zero()
        } else {
            x.clone()
        }
    }

    fn leq(&self, x: &Subspace, y: &Subspace) -> bool {
        y.contains(x)
    }

    fn is_primitive(&self, x: &Subspace) -> bool {
        x.dim() == 0
    }

    fn primitive_witness(&self, _x: &Subspace) -> Subspace {
        self.zero()
    }

    fn exact_primitives(&self, _x: &Subspace) -> Option<Vec<Subspace>> {
        Some(vec![self.zero()])
    }

    fn sample(&self, rng: &mut CheckRng, count: usize) -> Vec<Subspace> {
        let mut out = vec![
            self.zero(),
            Subspace::full(2),
            Subspace::line(Rational::one(), Rational::zero()),
            Subspace::line(Rational::zero(), Rational::one()),
            Subspace::line(Rational::one(), Rational::one()),
        ];
        out.truncate(count);
        while out.len() < count {
            let pick = rng.random_range(0..8);
            out.push(match pick {
                0 => self.zero(),
                1 => Subspace::full(2),
                _ => random_line(rng),
            });
        }
        out
    }

    fn exact_sets(&self) -> Vec<SetKind> {
        vec![SetKind::LatticeFamily]
    }
}
