//! Row-reduced subspaces of graded pieces.
//!
//! [`RowSpace`] keeps a sparse matrix in reduced row echelon form over a fixed column
//! order. Since the RREF of a space is unique, membership tests and the stored rows do
//! not depend on the order in which spanning vectors were inserted.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::poly::{Monomial, MultiPoly, PolyRing};

/// Sorted `(column, value)` pairs; the first entry of a stored row is its pivot with value 1.
pub type SparseRow = Vec<(usize, Scalar)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowSpace {
    ncols: usize,
    field: Field,
    rows: BTreeMap<usize, SparseRow>,
}

impl RowSpace {
    pub fn new(ncols: usize, field: Field) -> Self {
        RowSpace {
            ncols,
            field,
            rows: BTreeMap::new(),
        }
    }

    pub fn full(ncols: usize, field: Field) -> Self {
        let rows = (0..ncols).map(|c| (c, vec![(c, field.one())])).collect();
        RowSpace { ncols, field, rows }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseRow> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Residual of `v` modulo the space plus the coefficients `v[pivot]` that express the
    /// removed part in terms of the rows (in pivot order).
    pub fn reduce(&self, v: &[(usize, Scalar)]) -> (SparseRow, Vec<Scalar>) {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, x) in v {
            if !x.is_zero() {
                let e = acc.entry(*c).or_insert_with(|| self.field.zero());
                *e += x;
            }
        }
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (&p, row) in &self.rows {
            let c = acc.get(&p).cloned().unwrap_or_else(|| self.field.zero());
            if !c.is_zero() {
                for (col, val) in row {
                    let e = acc.entry(*col).or_insert_with(|| self.field.zero());
                    *e -= &(&c * val);
                }
            }
            coeffs.push(c);
        }
        let residual = acc.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        (residual, coeffs)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let (residual, _) = self.reduce(v);
        let Some((pivot, lead)) = residual.first().cloned() else {
            return false;
        };
        debug_assert!(pivot < self.ncols);
        let inv = lead.inv().expect("nonzero lead");
        let new_row: SparseRow = residual.into_iter().map(|(c, x)| (c, &x * &inv)).collect();
        for row in self.rows.values_mut() {
            if let Ok(i) = row.binary_search_by_key(&pivot, |(c, _)| *c) {
                let factor = row[i].1.clone();
                *row = axpy(row, &-&factor, &new_row);
            }
        }
        self.rows.insert(pivot, new_row);
        true
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// `a + c * b` for sorted sparse rows.
fn axpy(a: &SparseRow, c: &Scalar, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = c * &b[j].1;
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Ordered monomial basis of one graded piece (one weighted degree).
#[derive(Debug)]
pub struct MonomialBasis {
    ring: Arc<PolyRing>,
    degree: u32,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(ring: &Arc<PolyRing>, degree: u32, monomials: Vec<Monomial>) -> Arc<Self> {
        debug_assert!(monomials.iter().all(|m| m.degree() == degree));
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        Arc::new(MonomialBasis {
            ring: ring.clone(),
            degree,
            monomials,
            index,
        })
    }

    /// Every monomial of weighted degree `t` in `ring`.
    pub fn all(ring: &Arc<PolyRing>, t: u32) -> Arc<Self> {
        MonomialBasis::new(ring, t, ring.monomials_of_degree(t))
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous polynomial of this degree.
    pub fn coords(&self, p: &MultiPoly) -> Result<SparseRow> {
        let mut out = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            if m.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: m.degree(),
                });
            }
            let i = self
                .position(m)
                .ok_or_else(|| Error::NotInAmbient(m.display(p.ring()).to_string()))?;
            out.push((i, c.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn to_poly(&self, row: &[(usize, Scalar)]) -> MultiPoly {
        MultiPoly::from_terms(&self.ring, row.iter().map(|(i, c)| (self.monomials[*i], c.clone())))
    }
}

/// A subspace of one graded piece, stored in reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Arc<MonomialBasis>,
    space: RowSpace,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.basis.degree == other.basis.degree
            && self.basis.monomials == other.basis.monomials
            && self.space == other.space
    }
}

impl Subspace {
    pub fn zero(basis: &Arc<MonomialBasis>) -> Self {
        Subspace {
            basis: basis.clone(),
            space: RowSpace::new(basis.len(), basis.ring.field()),
        }
    }

    pub fn full(basis: &Arc<MonomialBasis>) -> Self {
        Subspace {
            basis: basis.clone(),
            space: RowSpace::full(basis.len(), basis.ring.field()),
        }
    }

    /// Span of homogeneous vectors of the basis degree; zero vectors are ignored.
    pub fn span<'a>(basis: &Arc<MonomialBasis>, vectors: impl IntoIterator<Item = &'a MultiPoly>) -> Result<Self> {
        let mut s = Subspace::zero(basis);
        for v in vectors {
            s.insert(v)?;
        }
        Ok(s)
    }

    /// Span of coordinate vectors already expressed in `basis`.
    pub fn span_coords(basis: &Arc<MonomialBasis>, rows: impl IntoIterator<Item = SparseRow>) -> Self {
        let mut s = Subspace::zero(basis);
        for r in rows {
            s.space.insert(&r);
        }
        s
    }

    pub fn insert(&mut self, v: &MultiPoly) -> Result<bool> {
        if v.is_zero() {
            return Ok(false);
        }
        if !v.is_homogeneous() {
            return Err(Error::Inhomogeneous(v.to_string()));
        }
        let c = self.basis.coords(v)?;
        Ok(self.space.insert(&c))
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn degree(&self) -> u32 {
        self.basis.degree
    }

    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    pub fn row_space(&self) -> &RowSpace {
        &self.space
    }

    /// Basis vectors (the echelon rows) as polynomials.
    pub fn rows(&self) -> Vec<MultiPoly> {
        self.space.rows().map(|r| self.basis.to_poly(r)).collect()
    }

    /// Membership with witness: `Some(c)` when `v = sum c_i * rows()[i]`.
    pub fn contains(&self, v: &MultiPoly) -> Result<Option<Vec<Scalar>>> {
        if v.is_zero() {
            return Ok(Some(vec![self.basis.ring.field().zero(); self.dim()]));
        }
        match v.homogeneous_degree() {
            Some(d) if d == self.degree() => {}
            Some(d) => {
                return Err(Error::DegreeMismatch {
                    expected: self.degree(),
                    found: d,
                })
            }
            None => return Err(Error::Inhomogeneous(v.to_string())),
        }
        let c = self.basis.coords(v)?;
        let (res, coeffs) = self.space.reduce(&c);
        Ok(res.is_empty().then_some(coeffs))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.space.rows().all(|r| other.space.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for r in other.space.rows() {
            s.space.insert(r);
        }
        s
    }
}

/// A subspace of the truncated direct sum of several graded pieces, with columns ordered by
/// ascending degree. Used for inhomogeneous ideals: the number of pivots falling in the block
/// of degree `t` is the dimension of the degree-`t` piece of the ideal of lowest-degree forms.
#[derive(Debug)]
pub struct FilteredSpace {
    blocks: Vec<Arc<MonomialBasis>>,
    offsets: Vec<usize>,
    by_degree: HashMap<u32, usize>,
    max_degree: u32,
    space: RowSpace,
}

impl FilteredSpace {
    /// `blocks` must have strictly increasing degrees.
    pub fn new(blocks: Vec<Arc<MonomialBasis>>) -> Self {
        assert!(blocks.windows(2).all(|w| w[0].degree < w[1].degree));
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut n = 0;
        for b in &blocks {
            offsets.push(n);
            n += b.len();
        }
        let field = blocks
            .first()
            .map(|b| b.ring.field())
            .unwrap_or(Field::Rational);
        let by_degree = blocks.iter().enumerate().map(|(i, b)| (b.degree, i)).collect();
        let max_degree = blocks.last().map(|b| b.degree).unwrap_or(0);
        FilteredSpace {
            blocks,
            offsets,
            by_degree,
            max_degree,
            space: RowSpace::new(n, field),
        }
    }

    /// Coordinates of `p`, silently dropping terms above the truncation degree.
    pub fn coords(&self, p: &MultiPoly) -> Result<SparseRow> {
        let mut out = Vec::new();
        for (m, c) in p.terms() {
            if m.degree() > self.max_degree {
                continue;
            }
            let b = *self
                .by_degree
                .get(&m.degree())
                .ok_or_else(|| Error::NotInAmbient(m.display(p.ring()).to_string()))?;
            let i = self.blocks[b]
                .position(m)
                .ok_or_else(|| Error::NotInAmbient(m.display(p.ring()).to_string()))?;
            out.push((self.offsets[b] + i, c.clone()));
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    pub fn insert(&mut self, p: &MultiPoly) -> Result<bool> {
        let c = self.coords(p)?;
        Ok(self.space.insert(&c))
    }

    pub fn insert_coords(&mut self, c: &[(usize, Scalar)]) -> bool {
        self.space.insert(c)
    }

    /// Membership modulo the truncation.
    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.space.contains(&self.coords(p)?))
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    fn block_of_column(&self, col: usize) -> usize {
        match self.offsets.binary_search(&col) {
            Ok(mut i) => {
                // skip empty blocks sharing the same offset
                while i + 1 < self.offsets.len() && self.offsets[i + 1] == col {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }

    /// Lowest-degree forms of the space, one subspace per block.
    pub fn initial_pieces(&self) -> Vec<Subspace> {
        let mut rows: Vec<Vec<SparseRow>> = vec![Vec::new(); self.blocks.len()];
        for row in self.space.rows() {
            let b = self.block_of_column(row[0].0);
            let lo = self.offsets[b];
            let hi = lo + self.blocks[b].len();
            rows[b].push(
                row.iter()
                    .filter(|(c, _)| *c >= lo && *c < hi)
                    .map(|(c, x)| (c - lo, x.clone()))
                    .collect(),
            );
        }
        self.blocks
            .iter()
            .zip(rows)
            .map(|(b, r)| Subspace::span_coords(b, r))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<PolyRing> {
        PolyRing::new(&["y", "z"], &[1, 1], Field::Rational)
    }

    fn m(r: &Arc<PolyRing>, a: u16, b: u16) -> MultiPoly {
        MultiPoly::monomial(r, &[a, b], 1)
    }

    #[test]
    fn dependent_span() {
        let r = ring();
        let b = MonomialBasis::all(&r, 2);
        let v = [m(&r, 2, 0), m(&r, 1, 1), &m(&r, 2, 0) + &m(&r, 1, 1)];
        assert_eq!(Subspace::span(&b, &v).unwrap().dim(), 2);
        assert_eq!(Subspace::span(&b, []).unwrap().dim(), 0);
    }

    #[test]
    fn full_quadratics_in_three_vars() {
        let r = PolyRing::new(&["x", "y", "z"], &[1, 1, 1], Field::Rational);
        let b = MonomialBasis::all(&r, 2);
        let v: Vec<MultiPoly> = b.monomials().iter().map(|mm| MultiPoly::term(&r, *mm, r.field().one())).collect();
        assert_eq!(Subspace::span(&b, &v).unwrap().dim(), 6);
    }

    #[test]
    fn membership_and_witness() {
        let r = ring();
        let b = MonomialBasis::all(&r, 2);
        let s = Subspace::span(&b, &[m(&r, 2, 0), m(&r, 0, 2)]).unwrap();
        let v = &m(&r, 2, 0) - &m(&r, 0, 2);
        let w = s.contains(&v).unwrap().expect("member");
        let rebuilt = s
            .rows()
            .iter()
            .zip(&w)
            .fold(MultiPoly::zero(&r), |acc, (row, c)| &acc + &row.scale(c));
        assert_eq!(rebuilt, v);
        assert!(s.contains(&m(&r, 1, 1)).unwrap().is_none());
        assert!(Subspace::zero(&b).contains(&MultiPoly::zero(&r)).unwrap().is_some());
        assert!(matches!(s.contains(&m(&r, 1, 0)), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn inhomogeneous_rejected() {
        let r = ring();
        let b = MonomialBasis::all(&r, 2);
        let v = &m(&r, 2, 0) + &m(&r, 1, 0);
        assert!(matches!(Subspace::span(&b, [&v]), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn filtered_initial_forms() {
        let r = ring();
        let blocks: Vec<_> = (0..4).map(|t| MonomialBasis::all(&r, t)).collect();
        let mut f = FilteredSpace::new(blocks);
        // y - z^2 and y*z have lowest forms y and y*z
        f.insert(&(&m(&r, 1, 0) - &m(&r, 0, 2))).unwrap();
        f.insert(&m(&r, 1, 1)).unwrap();
        let dims: Vec<usize> = f.initial_pieces().iter().map(|s| s.dim()).collect();
        assert_eq!(dims, vec![0, 1, 1, 0]);
        // terms above the truncation are dropped
        assert!(f.contains(&(&m(&r, 1, 0) - &m(&r, 0, 2))).unwrap());
        assert!(f.contains(&m(&r, 0, 5)).unwrap());
    }
}
