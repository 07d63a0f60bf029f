//! Finite-dimensional spans of vector fields: bracket closure, derived
//! series, solvable splittings and orbit tangent dimensions.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{check_dim, Error, Result};
use crate::exactpoly::Rational;
use crate::linalg::{Echelon, Matrix, SparseVec};
use crate::spectral::{self, InvariantSubspace};
use crate::vectorfield::{FieldKey, Verdict, VectorField};

pub const DEFAULT_DIM_CAP: usize = 64;
pub const DEFAULT_DEPTH_CAP: usize = 12;

/// A linear span of vector fields in reduced echelon form.
///
/// Two spans are equal exactly when their echelon bases are equal, so
/// `==` is equality of subspaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieSpan {
    n: usize,
    echelon: Echelon<FieldKey>,
}

impl LieSpan {
    pub fn new(n: usize) -> Self {
        LieSpan { n, echelon: Echelon::new() }
    }

    /// Linear span (not closure) of `fields`.
    pub fn from_fields(n: usize, fields: &[VectorField]) -> Result<Self> {
        let mut s = Self::new(n);
        for f in fields {
            s.insert(f)?;
        }
        Ok(s)
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.echelon.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.echelon.is_empty()
    }

    pub fn basis(&self) -> Vec<VectorField> {
        self.echelon.rows().map(|r| VectorField::from_sparse(self.n, r)).collect()
    }

    /// Adds `f`; returns whether the dimension grew.
    pub fn insert(&mut self, f: &VectorField) -> Result<bool> {
        check_dim(self.n, f.dim())?;
        Ok(self.echelon.insert(f.to_sparse()))
    }

    pub fn contains(&self, f: &VectorField) -> bool {
        f.dim() == self.n && self.echelon.contains(&f.to_sparse())
    }

    pub fn contains_span(&self, other: &LieSpan) -> bool {
        other.echelon.rows().all(|r| self.echelon.contains(r))
    }

    /// Coordinates in [`basis`](Self::basis), if `f` lies in the span.
    pub fn express(&self, f: &VectorField) -> Option<Vec<Rational>> {
        if f.dim() != self.n {
            return None;
        }
        self.echelon.express(&f.to_sparse())
    }

    /// Whether all brackets of basis elements stay in the span.
    pub fn is_closed(&self) -> Result<bool> {
        let b = self.basis();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if !self.contains(&b[i].bracket(&b[j])?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rank of the basis fields evaluated at `point`.
    pub fn tangent_dim(&self, point: &[Rational]) -> Result<usize> {
        check_dim(self.n, point.len())?;
        let rows: Vec<Vec<Rational>> = self
            .basis()
            .iter()
            .map(|f| f.coeffs().iter().map(|c| c.eval(point)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        if rows.is_empty() {
            return Ok(0);
        }
        Ok(Matrix::from_rows(rows).rank())
    }

    pub fn basis_strings(&self) -> Vec<String> {
        self.basis().iter().map(|f| f.to_string()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Closed,
    DimCapExceeded,
    DepthCapExceeded,
}

impl ClosureStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosureStatus::Closed => "closed",
            ClosureStatus::DimCapExceeded => "dim_cap_exceeded",
            ClosureStatus::DepthCapExceeded => "depth_cap_exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureReport {
    pub span: LieSpan,
    pub status: ClosureStatus,
    pub depth: usize,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.status == ClosureStatus::Closed
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status.as_str(),
            "dimension": self.span.dim(),
            "depth": self.depth,
            "basis": self.span.basis_strings(),
        })
    }
}

/// Bracket-closure of the generators.
///
/// Each pass brackets the fields added in the previous pass against the
/// whole current basis. The brackets are evaluated in parallel and then
/// inserted in a fixed order, so the result does not depend on scheduling.
pub fn lie_closure(generators: &[VectorField], dim_cap: usize, depth_cap: usize) -> Result<ClosureReport> {
    let n = generators
        .first()
        .map(VectorField::dim)
        .ok_or_else(|| Error::InvalidArgument("no generators supplied".into()))?;
    if dim_cap == 0 || depth_cap == 0 {
        return Err(Error::InvalidArgument("caps must be at least 1".into()));
    }
    let mut span = LieSpan::new(n);
    let mut fresh = Vec::new();
    for g in generators {
        check_dim(n, g.dim())?;
        if let Some(r) = span.insert_reduced(g) {
            fresh.push(r);
        }
    }
    let report = |span: LieSpan, status, depth| Ok(ClosureReport { span, status, depth });
    if span.dim() > dim_cap {
        return report(span, ClosureStatus::DimCapExceeded, 0);
    }
    let mut depth = 0;
    while !fresh.is_empty() {
        if depth == depth_cap {
            return report(span, ClosureStatus::DepthCapExceeded, depth);
        }
        depth += 1;
        let snapshot = span.basis();
        let pairs: Vec<(usize, usize)> =
            (0..fresh.len()).flat_map(|i| (0..snapshot.len()).map(move |j| (i, j))).collect();
        let brackets: Vec<VectorField> = pairs
            .par_iter()
            .map(|&(i, j)| fresh[i].bracket(&snapshot[j]))
            .collect::<Result<_>>()?;
        let mut next = Vec::new();
        for b in &brackets {
            if b.is_zero() {
                continue;
            }
            if let Some(r) = span.insert_reduced(b) {
                next.push(r);
                if span.dim() > dim_cap {
                    return report(span, ClosureStatus::DimCapExceeded, depth);
                }
            }
        }
        fresh = next;
    }
    report(span, ClosureStatus::Closed, depth)
}

impl LieSpan {
    /// Inserts `f` and returns its nonzero remainder, if any.
    fn insert_reduced(&mut self, f: &VectorField) -> Option<VectorField> {
        let rem = self.echelon.reduce(&f.to_sparse());
        if rem.is_empty() {
            return None;
        }
        self.echelon.insert(rem.clone());
        Some(VectorField::from_sparse(self.n, &rem))
    }
}

fn require_closed(l: &LieSpan) -> Result<()> {
    if l.is_closed()? {
        Ok(())
    } else {
        Err(Error::NotClosed)
    }
}

fn derived(l: &LieSpan) -> Result<LieSpan> {
    let b = l.basis();
    let mut out = LieSpan::new(l.n);
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            out.insert(&b[i].bracket(&b[j])?)?;
        }
    }
    Ok(out)
}

/// `L ⊇ [L, L] ⊇ ...`, starting with `L` itself and stopping at zero, at
/// stabilization, or after `max_steps` brackets.
pub fn derived_series(l: &LieSpan, max_steps: usize) -> Result<Vec<LieSpan>> {
    require_closed(l)?;
    let mut out = vec![l.clone()];
    for _ in 0..max_steps {
        let last = out.last().unwrap();
        if last.is_zero() {
            break;
        }
        let next = derived(last)?;
        let stable = next == *last;
        out.push(next);
        if stable {
            break;
        }
    }
    Ok(out)
}

pub fn is_solvable(l: &LieSpan) -> Result<bool> {
    let series = derived_series(l, l.dim() + 1)?;
    Ok(series.last().is_some_and(LieSpan::is_zero))
}

/// Common invariant subspace of a span together with the matrices of its
/// basis fields.
fn representation(l: &LieSpan, degree_cap: usize) -> Result<(Vec<VectorField>, InvariantSubspace)> {
    let basis = l.basis();
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty span".into()));
    }
    let space = spectral::find_common_invariant_subspace(&basis, degree_cap)?;
    Ok((basis, space))
}

fn combine(fields: &[VectorField], coords: &[Rational], n: usize) -> VectorField {
    fields
        .iter()
        .zip(coords)
        .fold(VectorField::zero(n), |acc, (f, c)| acc.add(&f.scale(c)))
}

/// Elements of `l` acting nilpotently on `V`: those `X` with
/// `tr(ρ(X) P) = 0` for every `P` in the unital associative algebra
/// generated by `ρ(l)`. For solvable `l` this is exactly the nilpotent
/// ideal, since `ρ(l)` is simultaneously triangularizable.
fn nilpotent_part(basis: &[VectorField], mats: &[Matrix], n: usize) -> LieSpan {
    let d = mats.first().map_or(0, Matrix::rows);
    let flat = |m: &Matrix| -> SparseVec<usize> {
        (0..d * d)
            .filter_map(|k| {
                let v = &m[(k / d, k % d)];
                (!v.is_zero()).then(|| (k, v.clone()))
            })
            .collect()
    };
    let mut algebra: Vec<Matrix> = vec![Matrix::identity(d)];
    let mut ech: Echelon<usize> = Echelon::new();
    ech.insert(flat(&algebra[0]));
    let mut i = 0;
    while i < algebra.len() {
        let p = algebra[i].clone();
        for m in mats {
            let q = m.mul(&p);
            if ech.insert(flat(&q)) {
                algebra.push(q);
            }
        }
        i += 1;
    }
    let mut cond = Matrix::zeros(algebra.len(), mats.len());
    for (r, p) in algebra.iter().enumerate() {
        for (c, m) in mats.iter().enumerate() {
            cond[(r, c)] = m.mul(p).trace();
        }
    }
    let mut out = LieSpan::new(n);
    for v in cond.nullspace() {
        out.insert(&combine(basis, &v, n)).expect("dimensions agree");
    }
    out
}

/// Basis of `{X ∈ span(basis) : [X, s] = 0 for all s}`.
fn centralizer(basis: &[VectorField], of: &[VectorField], n: usize) -> Result<LieSpan> {
    let mut rows: BTreeMap<(usize, FieldKey), Vec<Rational>> = BTreeMap::new();
    for (j, b) in basis.iter().enumerate() {
        for (si, s) in of.iter().enumerate() {
            for (k, v) in b.bracket(s)?.to_sparse() {
                rows.entry((si, k)).or_insert_with(|| vec![Rational::zero(); basis.len()])[j] = v;
            }
        }
    }
    let mut out = LieSpan::new(n);
    if rows.is_empty() {
        for b in basis {
            out.insert(b)?;
        }
        return Ok(out);
    }
    let m = Matrix::from_rows(rows.into_values().collect());
    for v in m.nullspace() {
        out.insert(&combine(basis, &v, n))?;
    }
    Ok(out)
}

/// A toral part and the nilpotent ideal of a closed solvable span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvableSplit {
    pub toral: LieSpan,
    pub nilpotent: LieSpan,
    pub subspace_dim: usize,
}

impl SolvableSplit {
    pub fn to_json(&self) -> Value {
        json!({
            "toral": self.toral.basis_strings(),
            "nilpotent": self.nilpotent.basis_strings(),
            "subspace_dimension": self.subspace_dim,
        })
    }
}

/// Split a closed solvable span as `S ⊕ N`: `N` the elements nilpotent on a
/// common invariant subspace, `S` commuting semisimple elements.
///
/// `S` is grown one element at a time: pick `X` centralizing the current
/// `S` but outside `S + N`, and add its semisimple part, which must lie in
/// the span. If it does not, the span is not closed under Jordan parts and
/// no splitting exists inside it.
pub fn split_solvable(l: &LieSpan, degree_cap: usize) -> Result<SolvableSplit> {
    if !is_solvable(l)? {
        return Err(Error::NotSolvable);
    }
    let n = l.nvars();
    if l.is_zero() {
        return Ok(SolvableSplit { toral: l.clone(), nilpotent: l.clone(), subspace_dim: n });
    }
    let (basis, space) = representation(l, degree_cap)?;
    let nil = nilpotent_part(&basis, space.matrices(), n);
    let mut toral: Vec<VectorField> = Vec::new();
    loop {
        let mut sum = nil.clone();
        for t in &toral {
            sum.insert(t)?;
        }
        if sum.dim() == l.dim() {
            break;
        }
        let cent = centralizer(&basis, &toral, n)?;
        let x = cent
            .basis()
            .into_iter()
            .find(|c| !sum.contains(c))
            .ok_or_else(|| Error::NotSplittable("centralizer of the toral part lies in S + N".into()))?;
        let parts = spectral::jordan_decompose(&x, degree_cap)?;
        let xs = parts.semisimple;
        if !l.contains(&xs) {
            return Err(Error::NotSplittable(format!("semisimple part {xs} of {x} is not in the span")));
        }
        toral.push(xs);
    }
    let toral = LieSpan::from_fields(n, &toral)?;
    Ok(SolvableSplit { toral, nilpotent: nil, subspace_dim: space.dim() })
}

/// Smallest span containing `l` that is closed under the bracket and under
/// taking Jordan parts of its elements.
pub fn j_saturate(l: &LieSpan, degree_cap: usize, dim_cap: usize, depth_cap: usize) -> Result<LieSpan> {
    if !is_solvable(l)? {
        return Err(Error::NotSolvable);
    }
    let mut cur = l.clone();
    loop {
        let mut gens = cur.basis();
        if gens.is_empty() {
            return Ok(cur);
        }
        let space = spectral::find_common_invariant_subspace(&gens, degree_cap)?;
        for b in cur.basis() {
            let parts = spectral::jordan_on(&b, space.clone())?;
            gens.push(parts.semisimple);
            gens.push(parts.nilpotent);
        }
        let report = lie_closure(&gens, dim_cap, depth_cap)?;
        if !report.is_closed() {
            return Err(Error::ClosureCapExceeded(report.status.as_str().into()));
        }
        if report.span == cur {
            return Ok(cur);
        }
        cur = report.span;
    }
}

/// Dimension of the orbit through `point` of the group generated by the
/// fields: the rank of the closed span evaluated there.
pub fn orbit_tangent_dim(
    generators: &[VectorField],
    point: &[Rational],
    dim_cap: usize,
    depth_cap: usize,
) -> Result<usize> {
    let report = lie_closure(generators, dim_cap, depth_cap)?;
    if !report.is_closed() {
        return Err(Error::ClosureCapExceeded(report.status.as_str().into()));
    }
    report.span.tangent_dim(point)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremBVerdict {
    UnipotentAlgebraic,
    AlgebraicNotSolvable,
    Undetermined,
}

impl TheoremBVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremBVerdict::UnipotentAlgebraic => "unipotent-algebraic",
            TheoremBVerdict::AlgebraicNotSolvable => "algebraic-not-solvable",
            TheoremBVerdict::Undetermined => "undetermined",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremBReport {
    pub verdict: TheoremBVerdict,
    pub closure: ClosureReport,
    /// Dimension of the common invariant subspace on which every basis
    /// element was checked to be nilpotent.
    pub witness_dim: Option<usize>,
    pub reason: Option<String>,
}

impl TheoremBReport {
    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.as_str(),
            "dimension": self.closure.span.dim(),
            "status": self.closure.status.as_str(),
            "witness_dimension": self.witness_dim,
            "reason": self.reason,
            "basis": self.closure.span.basis_strings(),
        })
    }
}

/// Closure test for a family of locally nilpotent fields: a closed solvable
/// closure acting nilpotently on a common invariant subspace is the Lie
/// algebra of a unipotent group.
pub fn check_theorem_b(
    lnd_generators: &[VectorField],
    dim_cap: usize,
    depth_cap: usize,
    nilpotency_bound: usize,
    degree_cap: usize,
) -> Result<TheoremBReport> {
    for g in lnd_generators {
        if g.is_locally_nilpotent(nilpotency_bound)? != Verdict::True {
            return Err(Error::NotLocallyNilpotent(nilpotency_bound));
        }
    }
    let closure = lie_closure(lnd_generators, dim_cap, depth_cap)?;
    let undetermined = |closure, reason: String| TheoremBReport {
        verdict: TheoremBVerdict::Undetermined,
        closure,
        witness_dim: None,
        reason: Some(reason),
    };
    if !closure.is_closed() {
        let why = format!("closure stopped: {}", closure.status.as_str());
        return Ok(undetermined(closure, why));
    }
    if !is_solvable(&closure.span)? {
        return Ok(TheoremBReport {
            verdict: TheoremBVerdict::AlgebraicNotSolvable,
            closure,
            witness_dim: None,
            reason: None,
        });
    }
    if closure.span.is_zero() {
        return Ok(TheoremBReport {
            verdict: TheoremBVerdict::UnipotentAlgebraic,
            closure,
            witness_dim: Some(0),
            reason: None,
        });
    }
    let (_, space) = match representation(&closure.span, degree_cap) {
        Ok(r) => r,
        Err(e) => return Ok(undetermined(closure, e.to_string())),
    };
    if space.matrices().iter().all(Matrix::is_nilpotent) {
        let d = space.dim();
        Ok(TheoremBReport {
            verdict: TheoremBVerdict::UnipotentAlgebraic,
            closure,
            witness_dim: Some(d),
            reason: None,
        })
    } else {
        Ok(undetermined(closure, "a basis element is not nilpotent on the invariant subspace".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::int;
    use crate::vectorfield::partial_basis_field;

    fn vf(s: &str) -> VectorField {
        VectorField::parse(s).unwrap()
    }

    fn span(fields: &[&str]) -> LieSpan {
        LieSpan::from_fields(2, &fields.iter().map(|s| vf(s)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn closure_examples() {
        let r = lie_closure(&[vf("[y, 0]"), vf("[0, x]")], 64, 12).unwrap();
        assert!(r.is_closed());
        assert_eq!(r.span.dim(), 3);
        assert!(r.span.contains(&vf("[x, -y]")));
        let r = lie_closure(&[vf("[y, 0]"), vf("[y^2, 0]")], 64, 12).unwrap();
        assert_eq!((r.status, r.span.dim()), (ClosureStatus::Closed, 2));
        let gens = [partial_basis_field(-1, 2).unwrap(), partial_basis_field(2, -1).unwrap()];
        let r = lie_closure(&gens, 40, 12).unwrap();
        assert_eq!(r.status, ClosureStatus::DimCapExceeded);
    }

    #[test]
    fn derived_examples() {
        let sl2 = lie_closure(&[vf("[y, 0]"), vf("[0, x]")], 64, 12).unwrap().span;
        assert!(!is_solvable(&sl2).unwrap());
        let series = derived_series(&sl2, 5).unwrap();
        assert_eq!(series.last().unwrap(), &sl2);
        let b = span(&["[x, 0]", "[y, 0]"]);
        let s = derived_series(&b, 5).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], span(&["[y, 0]"]));
        assert!(s[2].is_zero());
        assert!(is_solvable(&LieSpan::new(2)).unwrap());
        assert!(matches!(derived_series(&span(&["[y, 0]", "[0, x]"]), 3), Err(Error::NotClosed)));
    }

    #[test]
    fn split_examples() {
        let s = split_solvable(&span(&["[x, -y]", "[y, 0]"]), 6).unwrap();
        assert_eq!(s.toral, span(&["[x, -y]"]));
        assert_eq!(s.nilpotent, span(&["[y, 0]"]));
        let s = split_solvable(&span(&["[y, 0]", "[y^2, 0]"]), 6).unwrap();
        assert!(s.toral.is_zero());
        assert_eq!(s.nilpotent.dim(), 2);
        let s = split_solvable(&span(&["[x, y]"]), 6).unwrap();
        assert_eq!(s.toral.dim(), 1);
        assert!(s.nilpotent.is_zero());
        assert!(matches!(split_solvable(&span(&["[x + y, y]"]), 6), Err(Error::NotSplittable(_))));
    }

    #[test]
    fn saturation_examples() {
        let j = j_saturate(&span(&["[x + y, y]"]), 6, 64, 12).unwrap();
        assert_eq!(j, span(&["[x, y]", "[y, 0]"]));
        assert_eq!(j_saturate(&span(&["[x, 0]"]), 6, 64, 12).unwrap(), span(&["[x, 0]"]));
        assert_eq!(j_saturate(&span(&["[y, 0]"]), 6, 64, 12).unwrap(), span(&["[y, 0]"]));
    }

    #[test]
    fn orbit_dims() {
        let sl2 = [vf("[y, 0]"), vf("[0, x]")];
        assert_eq!(orbit_tangent_dim(&sl2, &[int(1), int(0)], 64, 12).unwrap(), 2);
        assert_eq!(orbit_tangent_dim(&sl2, &[int(0), int(0)], 64, 12).unwrap(), 0);
        assert_eq!(orbit_tangent_dim(&[vf("[y, 0]")], &[int(0), int(1)], 64, 12).unwrap(), 1);
    }

    #[test]
    fn theorem_b_examples() {
        let r = check_theorem_b(&[vf("[y, 0]"), vf("[y^2, 0]")], 64, 12, 8, 6).unwrap();
        assert_eq!(r.verdict, TheoremBVerdict::UnipotentAlgebraic);
        assert_eq!(r.closure.span.dim(), 2);
        let r = check_theorem_b(&[vf("[y, 0]"), vf("[0, x]")], 64, 12, 8, 6).unwrap();
        assert_eq!(r.verdict, TheoremBVerdict::AlgebraicNotSolvable);
        assert!(matches!(check_theorem_b(&[vf("[x, 0]")], 64, 12, 8, 6), Err(Error::NotLocallyNilpotent(8))));
    }
}
