//! Random instance generators and brute-force reference computations shared
//! by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skewdet::field::{BaseField, FieldSpec, Scalar, Twist};
use skewdet::linalg::{series_diagonalize, ScalarMatrix, SeriesMatrix};
use skewdet::series::Series;
use skewdet::skew::SkewPolyMatrix;
use skewdet::ZetaOutcome;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn spec(base: BaseField, var: Option<&str>, twist: Twist) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::new(base, var.map(str::to_string), twist).expect("valid field"))
}

/// The field/twist combinations exercised by the engine agreement checks.
pub fn engine_configs() -> Vec<(&'static str, Arc<FieldSpec>)> {
    let q2 = FieldSpec::rationals().from_i64(2);
    vec![
        (
            "commutative Q",
            spec(BaseField::Rationals, None, Twist::Commutative),
        ),
        (
            "commutative GF(5)",
            spec(BaseField::Prime(5), None, Twist::Commutative),
        ),
        (
            "differential GF(5)(t)",
            spec(BaseField::Prime(5), Some("t"), Twist::Differential),
        ),
        (
            "differential Q(t)",
            spec(BaseField::Rationals, Some("t"), Twist::Differential),
        ),
        (
            "shift GF(5)(t)",
            spec(BaseField::Prime(5), Some("t"), Twist::shift()),
        ),
        (
            "shift Q(t)",
            spec(BaseField::Rationals, Some("t"), Twist::shift()),
        ),
        (
            "q-shift Q(t), q = 2",
            spec(BaseField::Rationals, Some("t"), Twist::QShift(q2)),
        ),
    ]
}

/// A random element of small height; `density` is the chance of a nonzero.
pub fn scalar(k: &FieldSpec, rng: &mut Rng8, density: f64) -> Scalar {
    if !rng.gen_bool(density) {
        return k.zero();
    }
    loop {
        let x = raw_scalar(k, rng);
        if !x.is_zero() {
            return x;
        }
    }
}

fn small(k: &FieldSpec, rng: &mut Rng8) -> Scalar {
    match k.base() {
        BaseField::Rationals => k.from_i64(rng.gen_range(-3..=3)),
        BaseField::Prime(p) => k.from_i64(rng.gen_range(0..*p as i64)),
    }
}

fn raw_scalar(k: &FieldSpec, rng: &mut Rng8) -> Scalar {
    if !k.is_function_field() {
        let a = small(k, rng);
        if matches!(k.base(), BaseField::Rationals) && rng.gen_bool(0.2) {
            let d = k.from_i64(rng.gen_range(2..=3));
            return a.try_div(&d).unwrap();
        }
        return a;
    }
    let t = k.var().unwrap();
    let num = &small(k, rng) + &(&small(k, rng) * &t);
    if rng.gen_bool(0.15) {
        let den = &t + &small(k, rng);
        if let Ok(x) = num.try_div(&den) {
            return x;
        }
    }
    num
}

/// Any scalar, including ones of larger height; used for field laws.
pub fn wide_scalar(k: &FieldSpec, rng: &mut Rng8) -> Scalar {
    let mut x = scalar(k, rng, 0.9);
    for _ in 0..rng.gen_range(0..3) {
        let y = scalar(k, rng, 0.9);
        x = match rng.gen_range(0..3) {
            0 => &x + &y,
            1 => &x * &y,
            _ => x.try_div(&y).unwrap_or(x),
        };
    }
    x
}

pub fn scalar_matrix(k: &Arc<FieldSpec>, n: usize, rng: &mut Rng8, density: f64) -> ScalarMatrix {
    let entries = (0..n * n).map(|_| scalar(k, rng, density)).collect();
    ScalarMatrix::new(k.clone(), n, n, entries).unwrap()
}

/// A random `n × n` skew polynomial matrix with `A_ℓ ≠ 0`. About one in five
/// has a row that is a left multiple of another, hence is singular.
pub fn skew_matrix(k: &Arc<FieldSpec>, n: usize, ell: usize, rng: &mut Rng8) -> SkewPolyMatrix {
    let density = rng.gen_range(0.35..0.9);
    let mut coeffs: Vec<ScalarMatrix> = (0..=ell)
        .map(|_| scalar_matrix(k, n, rng, density))
        .collect();
    while coeffs[ell].is_zero() {
        coeffs[ell] = scalar_matrix(k, n, rng, density);
    }
    if n > 1 && rng.gen_bool(0.2) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = scalar(k, rng, 1.0);
        for a in coeffs.iter_mut() {
            for col in 0..n {
                let v = &c * a.get(j, col);
                a.set(i, col, v);
            }
        }
    }
    SkewPolyMatrix::new(k.clone(), coeffs).unwrap()
}

/// A random series with `len` stored coefficients starting at `offset`.
pub fn series(k: &Arc<FieldSpec>, offset: i64, len: usize, rng: &mut Rng8) -> Series {
    let coeffs = (0..len).map(|_| scalar(k, rng, 0.7)).collect();
    Series::new(k.clone(), offset, coeffs)
}

/// A unit: nonzero constant term.
pub fn unit_series(k: &Arc<FieldSpec>, len: usize, rng: &mut Rng8) -> Series {
    let mut coeffs: Vec<Scalar> = (0..len).map(|_| scalar(k, rng, 0.7)).collect();
    coeffs[0] = scalar(k, rng, 1.0);
    Series::new(k.clone(), 0, coeffs)
}

/// Polynomials in a commuting indeterminate, ascending coefficients.
pub type SPoly = Vec<Scalar>;

fn poly_trim(mut p: SPoly) -> SPoly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(k: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> SPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    poly_trim(out)
}

fn poly_add(k: &FieldSpec, a: &[Scalar], b: &[Scalar], negate: bool) -> SPoly {
    let len = a.len().max(b.len());
    let z = k.zero();
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).unwrap_or(&z);
            let y = b.get(i).unwrap_or(&z);
            if negate {
                x - y
            } else {
                x + y
            }
        })
        .collect();
    poly_trim(out)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// Degree of the Leibniz determinant of a commutative polynomial matrix,
/// `None` when the determinant vanishes.
pub fn leibniz_degree(a: &SkewPolyMatrix) -> Option<usize> {
    let k = a.field();
    let n = a.n();
    let mut det: SPoly = Vec::new();
    for p in permutations(n) {
        let mut term: SPoly = vec![k.one()];
        for (i, &j) in p.iter().enumerate() {
            term = poly_mul(k, &term, &poly_trim(a.entry(i, j)));
            if term.is_empty() {
                break;
            }
        }
        det = poly_add(k, &det, &term, !sign(&p));
    }
    det.len().checked_sub(1)
}

/// Minimum weight of a perfect matching by enumerating permutations.
pub fn brute_force_matching(w: &[Vec<Option<i64>>]) -> Option<i64> {
    permutations(w.len())
        .into_iter()
        .filter_map(|p| {
            p.iter()
                .enumerate()
                .map(|(i, &j)| w[i][j])
                .sum::<Option<i64>>()
        })
        .min()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Oracle ζ of a proper matrix given by π-coefficients.
pub fn oracle_zeta(coeffs: &[ScalarMatrix], budget: u64) -> ZetaOutcome {
    let keep = coeffs.len().min(budget as usize + 1);
    let a = SeriesMatrix::from_coeffs(&coeffs[..keep], budget as i64 + 1).unwrap();
    series_diagonalize(&a, budget).unwrap().outcome()
}

pub fn submatrix(coeffs: &[ScalarMatrix], rows: &[usize], cols: &[usize]) -> Vec<ScalarMatrix> {
    coeffs
        .iter()
        .map(|c| {
            let entries = rows
                .iter()
                .flat_map(|&i| cols.iter().map(move |&j| c.get(i, j).clone()))
                .collect();
            ScalarMatrix::new(c.field().clone(), rows.len(), cols.len(), entries).unwrap()
        })
        .collect()
}

/// ζ_k by minimizing the oracle over all `k × k` minors of `A s^{−ℓ}`;
/// each minor has ζ at most ℓk when nonsingular.
pub fn brute_force_minor_zeta(a: &SkewPolyMatrix, k: usize) -> Option<u64> {
    let proper = a.proper_coeffs();
    let budget = (a.ell() * k) as u64;
    let mut best: Option<u64> = None;
    for rows in subsets(a.n(), k) {
        for cols in subsets(a.n(), k) {
            if k == 0 {
                return Some(0);
            }
            if let ZetaOutcome::Zeta(z) = oracle_zeta(&submatrix(&proper, &rows, &cols), budget) {
                best = Some(best.map_or(z, |b| b.min(z)));
            }
        }
    }
    best
}
