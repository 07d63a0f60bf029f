//! The acceptance suite: twelve exact checks with seeded random corpora.

use std::time::Instant;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;
use crate::exactpoly::{int, rat, Monomial, Polynomial, Rational, UPoly};
use crate::liealg::{check_theorem_b, lie_closure, ClosureStatus, TheoremBVerdict};
use crate::linalg::Matrix;
use crate::plane::{
    self, free_word_eval, jvk_factorize, s_normal_form, word_to_sword, AffineMap, AmalgamWord, Factor, JonqFactor,
    Letter, SFactor, SKind, SWord,
};
use crate::polymap::{Automorphism, PolyMap};
use crate::spectral::{exp_lnd, exp_scaled, jordan_decompose, log_unipotent};
use crate::vectorfield::{partial_basis_field, VectorField};

pub const JORDAN_SEED: u64 = 0x4a43_0006;
pub const EXPLOG_SEED: u64 = 0x4558_0007;
pub const JVK_SEED: u64 = 0x4a56_0008;
pub const SWORD_SEED: u64 = 0x5357_0009;

/// Product of factor degrees allowed for one random S-word.
pub const SWORD_DEGREE_BUDGET: i64 = 128;

pub const CRITERIA: [&str; 12] = [
    "phi formula",
    "y-term lemma for k = 1..6",
    "bracket grading",
    "divergence of basis fields",
    "Lie closure",
    "Jordan-Chevalley corpus",
    "exp/log corpus",
    "JvK factorization corpus",
    "S-normal form and free-group witness",
    "phi degeneration",
    "unipotent-closure verdicts",
    "invariance of sl2 closure",
];

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {:>2} {}: {} ({} ms)", self.id, self.name, self.detail, self.millis)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "millis": self.millis as u64,
        })
    }
}

type Outcome = Result<(bool, String)>;

pub fn run_criterion(id: usize) -> CriterionResult {
    assert!((1..=12).contains(&id), "criterion {id} out of range");
    let start = Instant::now();
    let outcome = match id {
        1 => phi_formula(),
        2 => y_terms(),
        3 => bracket_grading(),
        4 => divergence(),
        5 => closures(),
        6 => jordan_corpus(),
        7 => explog_corpus(),
        8 => jvk_corpus(),
        9 => sword_corpus(),
        10 => degenerations(),
        11 => theorem_b(),
        _ => sl2_invariance(),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name: CRITERIA[id - 1], passed, detail, millis: start.elapsed().as_millis() }
}

pub fn run_all() -> Vec<CriterionResult> {
    (1..=12).map(run_criterion).collect()
}

fn vf(s: &str) -> VectorField {
    VectorField::parse(s).expect("literal field")
}

fn map(s: &str) -> PolyMap {
    PolyMap::parse(s).expect("literal map")
}

fn phi_formula() -> Outcome {
    let composed = map("(x + y^2, y)").compose(&map("(x, y + x^2)"))?;
    let stated = map("(x + y^2 + 2*x^2*y + y^4, y + x^2)");
    if composed == stated {
        Ok((true, format!("u∘v = {composed}")))
    } else {
        Ok((false, format!("u∘v = {composed}, stated formula {stated}")))
    }
}

fn y_terms() -> Outcome {
    let start = Instant::now();
    let mut coeffs = Vec::new();
    let mut ok = true;
    for k in 1..=6 {
        let r = plane::check_y_term(k)?;
        ok &= r.holds() && r.coefficient.is_integer();
        coeffs.push(r.coefficient.to_string());
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((ok && secs < 10.0, format!("coefficients [{}] in {secs:.2} s", coeffs.join(", "))))
}

fn bracket_grading() -> Outcome {
    let lower = partial_basis_field(-1, 2)?;
    let upper = partial_basis_field(2, -1)?;
    let mut bad = Vec::new();
    for i in 0..=6 {
        for j in 0..=6 {
            let d = partial_basis_field(i, j)?;
            for (e, target) in [(&lower, (i - 1, j + 2)), (&upper, (i + 2, j - 1))] {
                let exp = e.bracket(&d)?.expand_in_partial_basis()?;
                let single = exp.len() == 1 && exp.get(&target).is_some_and(|c| !c.is_zero());
                if !single {
                    bad.push(format!("({i},{j})->{target:?}"));
                }
            }
        }
    }
    Ok((bad.is_empty(), if bad.is_empty() { "98 brackets graded".into() } else { format!("failures {bad:?}") }))
}

fn divergence() -> Outcome {
    let mut count = 0;
    for i in -1..=8 {
        for j in -1..=8 {
            if (i, j) == (-1, -1) {
                continue;
            }
            if !partial_basis_field(i, j)?.divergence().is_zero() {
                return Ok((false, format!("Div ∂_({i},{j}) != 0")));
            }
            count += 1;
        }
    }
    Ok((true, format!("{count} basis fields divergence-free")))
}

fn closures() -> Outcome {
    let sl2 = lie_closure(&[vf("[y, 0]"), vf("[0, x]")], 64, 12)?;
    let ab = lie_closure(&[vf("[y, 0]"), vf("[y^2, 0]")], 64, 12)?;
    let big = lie_closure(&[partial_basis_field(-1, 2)?, partial_basis_field(2, -1)?], 40, 10)?;
    let mut graded = true;
    for b in big.span.basis() {
        graded &= b.is_s_invariant()?;
    }
    let ok = sl2.is_closed()
        && sl2.span.dim() == 3
        && ab.is_closed()
        && ab.span.dim() == 2
        && big.status == ClosureStatus::DimCapExceeded
        && graded;
    Ok((
        ok,
        format!(
            "dims {}, {}; third closure {} at dim {} depth {}, Λ0-graded {graded}",
            sl2.span.dim(),
            ab.span.dim(),
            big.status.as_str(),
            big.span.dim(),
            big.depth
        ),
    ))
}

fn small(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    int(rng.gen_range(lo..=hi))
}

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return int(v);
        }
    }
}

fn mono(n: usize, exps: &[u32]) -> Monomial {
    let mut e = vec![0; n];
    e[n - exps.len()..].copy_from_slice(exps);
    Monomial::from_exponents(&e)
}

/// Invertible integer matrix with small entries.
fn random_linear(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..n).map(|_| (0..n).map(|_| small(rng, -2, 2)).collect()).collect();
        let m = Matrix::from_rows(rows);
        if !m.determinant().is_zero() {
            return m;
        }
    }
}

fn linear_conjugate(rng: &mut ChaCha8Rng, f: VectorField) -> Result<VectorField> {
    let n = f.dim();
    let g = Automorphism::affine(&random_linear(rng, n), &vec![Rational::zero(); n])?;
    f.pushforward(&g)
}

/// Triangular fields with linear diagonal and quadratic tails that stay on
/// a degree-2 invariant subspace, optionally in linear coordinates.
pub fn jordan_corpus_fields(count: usize) -> Result<Vec<VectorField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(JORDAN_SEED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=3usize);
        let a: Vec<Rational> = (0..n).map(|_| small(&mut rng, -2, 2)).collect();
        let x = |i: usize| Polynomial::var(n, i);
        let term = |c: Rational, e: &[u32]| Polynomial::monomial(mono(n, e), c);
        let mut coeffs: Vec<Polynomial> = (0..n).map(|i| x(i).scale(&a[i])).collect();
        // Quadratic and linear feeds from later coordinates into earlier ones.
        coeffs[0] = &coeffs[0] + &term(small(&mut rng, -2, 2), &[2]);
        coeffs[0] = &coeffs[0] + &x(1).scale(&small(&mut rng, -1, 1));
        if n == 3 {
            coeffs[1] = &coeffs[1] + &term(small(&mut rng, -2, 2), &[2]);
            coeffs[1] = &coeffs[1] + &x(2).scale(&small(&mut rng, -1, 1));
        }
        let p = [int(1), int(2), rat(1, 2), int(-1)].choose(&mut rng).unwrap().clone();
        let mut f = VectorField::new(coeffs)?.scale(&p);
        if rng.gen_bool(0.5) {
            f = linear_conjugate(&mut rng, f)?;
        }
        if !f.is_zero() {
            out.push(f);
        }
    }
    Ok(out)
}

fn jordan_corpus() -> Outcome {
    let fields = jordan_corpus_fields(50)?;
    let results: Vec<Result<Option<String>>> = fields
        .par_iter()
        .map(|f| {
            let pair = jordan_decompose(f, 2)?;
            let sum = pair.semisimple.add(&pair.nilpotent) == *f;
            let commute = pair.semisimple.bracket(&pair.nilpotent)?.is_zero();
            let certs = pair.semisimple_matrix.is_semisimple()
                && pair.nilpotent_matrix.is_nilpotent()
                && pair.semisimple_matrix.commutator(&pair.nilpotent_matrix).is_zero()
                && pair.subspace.matrix_of(&pair.semisimple)? == pair.semisimple_matrix
                && pair.subspace.matrix_of(&pair.nilpotent)? == pair.nilpotent_matrix;
            Ok((!(sum && commute && certs)).then(|| f.to_string()))
        })
        .collect();
    let mut nontrivial = 0;
    for f in &fields {
        if !jordan_decompose(f, 2)?.nilpotent.is_zero() {
            nontrivial += 1;
        }
    }
    let bad: Vec<String> = results.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    Ok((
        bad.is_empty(),
        format!("{} fields, {nontrivial} with nonzero nilpotent part, failures {bad:?}", fields.len()),
    ))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, vars: &[usize], max_deg: u32, terms: usize) -> Polynomial {
    let mut acc = Polynomial::zero(n);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let d = rng.gen_range(0..=max_deg);
        for _ in 0..d {
            e[*vars.choose(rng).unwrap()] += 1;
        }
        acc = &acc + &Polynomial::monomial(Monomial::from_exponents(&e), nonzero(rng, 3));
    }
    acc
}

/// Triangular locally nilpotent fields of coefficient degree at most 4,
/// optionally in linear coordinates.
pub fn lnd_corpus_fields(count: usize) -> Result<Vec<VectorField>> {
    let mut rng = ChaCha8Rng::seed_from_u64(EXPLOG_SEED);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(2..=3usize);
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let later: Vec<usize> = (i + 1..n).collect();
            coeffs.push(if later.is_empty() {
                Polynomial::constant(n, small(&mut rng, -2, 2))
            } else {
                let terms = rng.gen_range(1..=3);
                random_poly(&mut rng, n, &later, 4, terms)
            });
        }
        let mut f = VectorField::new(coeffs)?;
        if rng.gen_bool(0.3) {
            f = linear_conjugate(&mut rng, f)?;
        }
        if !f.is_zero() && f.degree() <= 4 {
            out.push(f);
        }
    }
    Ok(out)
}

const EXP_BOUND: usize = 64;

fn explog_corpus() -> Outcome {
    let fields = lnd_corpus_fields(100)?;
    let roundtrip: Vec<Result<bool>> = fields
        .par_iter()
        .map(|f| {
            let g = exp_lnd(f, EXP_BOUND)?;
            Ok(log_unipotent(&g, EXP_BOUND)? == *f)
        })
        .collect();
    let failures = roundtrip.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|ok| !**ok).count();
    let params = [int(1), int(-1), rat(1, 2)];
    let additive: Vec<Result<bool>> = fields
        .par_iter()
        .take(20)
        .map(|f| {
            for s in &params {
                for t in &params {
                    let lhs = exp_scaled(f, &(s + t), EXP_BOUND)?;
                    let rhs = exp_scaled(f, s, EXP_BOUND)?.compose(&exp_scaled(f, t, EXP_BOUND)?)?;
                    if lhs.forward() != rhs.forward() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })
        .collect();
    let add_failures = additive.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|ok| !**ok).count();
    Ok((
        failures == 0 && add_failures == 0,
        format!("{} roundtrips ({failures} failed), additivity on 20 fields x 9 pairs ({add_failures} failed)", fields.len()),
    ))
}

fn random_jonq(rng: &mut ChaCha8Rng) -> JonqFactor {
    let deg = rng.gen_range(2..=5usize);
    let mut coeffs: Vec<Rational> = (0..=deg).map(|_| if rng.gen_bool(0.4) { small(rng, -2, 2) } else { int(0) }).collect();
    coeffs[deg] = nonzero(rng, 2);
    let unit = |rng: &mut ChaCha8Rng| [int(1), int(-1), int(2)].choose(rng).unwrap().clone();
    JonqFactor { a: unit(rng), h: UPoly::from_coeffs(coeffs), c: unit(rng), d: small(rng, -1, 1) }
}

fn random_affine(rng: &mut ChaCha8Rng) -> AffineMap {
    loop {
        let m = [[small(rng, -2, 2), small(rng, -2, 2)], [nonzero(rng, 2), small(rng, -2, 2)]];
        let b = [small(rng, -1, 1), small(rng, -1, 1)];
        if let Ok(a) = AffineMap::new(m, b) {
            return a;
        }
    }
}

/// Random reduced amalgam words: alternating factors, de Jonquieres
/// degrees 2..=5, affine factors outside the triangular group.
pub fn jvk_corpus_words(count: usize) -> Vec<AmalgamWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(JVK_SEED);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=6usize);
            let mut jonq = rng.gen_bool(0.5);
            let factors = (0..len)
                .map(|_| {
                    let f = if jonq { Factor::Jonq(random_jonq(&mut rng)) } else { Factor::Affine(random_affine(&mut rng)) };
                    jonq = !jonq;
                    f
                })
                .collect();
            AmalgamWord { factors }
        })
        .collect()
}

fn jvk_corpus() -> Outcome {
    let words = jvk_corpus_words(200);
    let checks: Vec<Result<Option<String>>> = words
        .par_iter()
        .enumerate()
        .map(|(idx, w)| {
            let g = w.recompose();
            let f = jvk_factorize(&g)?;
            if f.recompose() != g {
                return Ok(Some(format!("#{idx}: recomposition differs")));
            }
            if f.len() != w.len() || f.jonq_degrees() != w.jonq_degrees() {
                return Ok(Some(format!("#{idx}: length/degrees {} {:?} vs {} {:?}", f.len(), f.jonq_degrees(), w.len(), w.jonq_degrees())));
            }
            let again = jvk_factorize(&f.recompose())?;
            if again.len() != f.len() || again.jonq_degrees() != f.jonq_degrees() {
                return Ok(Some(format!("#{idx}: re-factorization differs")));
            }
            if !f.inverse().apply_left(&g).is_identity() {
                return Ok(Some(format!("#{idx}: inverse factors do not cancel")));
            }
            Ok(None)
        })
        .collect();
    let bad: Vec<String> = checks.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let max_deg = words.iter().map(|w| w.recompose().degree()).max().unwrap_or(0);
    Ok((bad.is_empty(), format!("{} words up to degree {max_deg}, failures {bad:?}", words.len())))
}

/// Random reduced S-words of length at most 5 with `deg f <= 3`, kept
/// under [`SWORD_DEGREE_BUDGET`].
pub fn sword_corpus_words(count: usize) -> Vec<SWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(SWORD_SEED);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=5usize);
            let mut kind = if rng.gen_bool(0.5) { SKind::J } else { SKind::Jminus };
            let mut budget = SWORD_DEGREE_BUDGET;
            let mut factors = Vec::with_capacity(len);
            for k in 0..len {
                // Reserve degree 2 for each remaining factor.
                let rest = 2i64.pow((len - k - 1) as u32);
                let mut deg = rng.gen_range(0..=3i64);
                while deg > 0 && (3 * deg + 2) * rest > budget {
                    deg -= 1;
                }
                budget /= 3 * deg + 2;
                let coeffs: Vec<Rational> = (0..=deg)
                    .map(|i| if i == deg { nonzero(&mut rng, 3) } else { small(&mut rng, -3, 3) })
                    .collect();
                factors.push(SFactor::new(kind, UPoly::from_coeffs(coeffs)));
                kind = if kind == SKind::J { SKind::Jminus } else { SKind::J };
            }
            SWord { factors }
        })
        .collect()
}

/// All freely reduced words of length at most `max_len`, with their maps;
/// each is built by one left multiplication from its suffix.
pub fn reduced_words(max_len: usize) -> Vec<(Vec<Letter>, PolyMap)> {
    let mut out = vec![(Vec::new(), PolyMap::identity(2))];
    let mut frontier = out.clone();
    for _ in 0..max_len {
        let next: Vec<(Vec<Letter>, PolyMap)> = frontier
            .par_iter()
            .flat_map_iter(|(w, g)| {
                Letter::ALL.into_iter().filter(move |l| w.first() != Some(&l.inverse())).map(move |l| {
                    let mut word = Vec::with_capacity(w.len() + 1);
                    word.push(l);
                    word.extend_from_slice(w);
                    let g = free_word_eval(&[l]).compose(g).expect("plane map");
                    (word, g)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn sword_corpus() -> Outcome {
    let words = sword_corpus_words(100);
    let checks: Vec<Result<bool>> = words
        .par_iter()
        .map(|w| {
            let g = w.recompose();
            let nf = s_normal_form(&g)?;
            Ok(nf == *w && s_normal_form(&nf.recompose())? == nf)
        })
        .collect();
    let failures = checks.into_iter().collect::<Result<Vec<_>>>()?.iter().filter(|ok| !**ok).count();

    let all = reduced_words(6);
    let witness: Vec<Result<(bool, bool)>> = all
        .par_iter()
        .skip(1)
        .map(|(w, g)| {
            let nf = s_normal_form(g)?;
            Ok((!g.is_identity() && nf == word_to_sword(w), nf.len() == w.len()))
        })
        .collect();
    let witness = witness.into_iter().collect::<Result<Vec<_>>>()?;
    let witness_fail = witness.iter().filter(|(ok, _)| !ok).count();
    let letter_eq = witness.iter().filter(|(_, eq)| *eq).count();
    Ok((
        failures == 0 && witness_fail == 0,
        format!(
            "{} random words ({failures} failed); {} reduced words non-trivial with syllable-length normal forms ({witness_fail} failed; {letter_eq} have no repeated letter)",
            words.len(),
            witness.len()
        ),
    ))
}

fn degenerations() -> Outcome {
    let mut parts = Vec::new();
    for k in 1..=3 {
        let d = plane::degenerate_phi_power(k)?;
        if d.coefficient.is_zero() {
            return Ok((false, format!("k={k}: zero coefficient")));
        }
        parts.push(format!("k={k}: {}", d.limit));
    }
    Ok((true, parts.join("; ")))
}

fn theorem_b() -> Outcome {
    let run = |gens: &[VectorField]| check_theorem_b(gens, 40, 10, 16, 6).map(|r| r.verdict);
    let a = run(&[vf("[y, 0]"), vf("[y^2, 0]"), vf("[y^3, 0]")])?;
    let b = run(&[vf("[y, 0]"), vf("[0, x]")])?;
    let c = run(&[partial_basis_field(-1, 2)?, partial_basis_field(2, -1)?])?;
    let ok = a == TheoremBVerdict::UnipotentAlgebraic
        && b == TheoremBVerdict::AlgebraicNotSolvable
        && c == TheoremBVerdict::Undetermined;
    Ok((ok, format!("{}, {}, {}", a.as_str(), b.as_str(), c.as_str())))
}

fn sl2_invariance() -> Outcome {
    let closure = lie_closure(&[vf("[y, 0]"), vf("[0, x]")], 64, 12)?;
    let basis = closure.span.basis();
    let mut checked = 0;
    for gen in ["[y, 0]", "[0, x]"] {
        for sign in [Rational::one(), -Rational::one()] {
            let g = exp_lnd(&vf(gen).scale(&sign), 4)?;
            for b in &basis {
                let pushed = b.pushforward(&g)?;
                if !closure.span.contains(&pushed) {
                    return Ok((false, format!("{pushed} outside the span")));
                }
                checked += 1;
            }
        }
    }
    Ok((closure.span.dim() == 3, format!("{checked} pushforwards stay in a span of dimension {}", closure.span.dim())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpora_are_deterministic() {
        assert_eq!(jvk_corpus_words(5), jvk_corpus_words(5));
        assert_eq!(sword_corpus_words(5), sword_corpus_words(5));
        assert_eq!(reduced_words(2).len(), 1 + 4 + 12);
        assert!(lnd_corpus_fields(10).unwrap().iter().all(|f| f.degree() <= 4));
    }

    #[test]
    fn sword_budget_respected() {
        for w in sword_corpus_words(100) {
            let prod: i64 = w.factors.iter().map(|f| f.degree()).product();
            assert!(prod <= SWORD_DEGREE_BUDGET, "{w}");
            assert!(w.factors.iter().all(|f| f.f.degree() <= 3));
        }
    }
}
