//! First-order deformations of the monomial pair `(z^d, zeta z^d)`.
//!
//! With `f = (a_d z^d + ... + a_0) / (b_d z^d + ... + b_1 z + 1)` and `g` the
//! same with capitals, the map `F = f o f - g o g` is differentiated in each of
//! the `4d + 2` coefficients at `f = z^d`, `g = zeta z^d`. Its image has
//! dimension `4d - 1` exactly when `zeta` is a primitive `(d+1)`-th root of unity.

use preper_algebra::{CycloScalar, Dual, ExactMatrix, MPoly, Poly, Ring};

/// A coefficient of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartialSpec {
    /// `A_k`, numerator of `g`, `k = 0..=d`.
    GNum(usize),
    /// `B_l`, denominator of `g`, `l = 1..=d`.
    GDen(usize),
    /// `a_i`, numerator of `f`, `i = 0..=d`.
    FNum(usize),
    /// `b_j`, denominator of `f`, `j = 1..=d`.
    FDen(usize),
}

impl PartialSpec {
    /// The `4d + 2` coefficients in matrix row order: `A_0..A_d, B_1..B_d, a_0..a_d, b_1..b_d`.
    pub fn all(d: usize) -> Vec<PartialSpec> {
        let mut v: Vec<_> = (0..=d).map(PartialSpec::GNum).collect();
        v.extend((1..=d).map(PartialSpec::GDen));
        v.extend((0..=d).map(PartialSpec::FNum));
        v.extend((1..=d).map(PartialSpec::FDen));
        v
    }

    fn check(&self, d: usize) {
        let ok = match *self {
            PartialSpec::GNum(k) | PartialSpec::FNum(k) => k <= d,
            PartialSpec::GDen(k) | PartialSpec::FDen(k) => (1..=d).contains(&k),
        };
        assert!(ok, "{self:?} out of range for degree {d}");
    }
}

type K = CycloScalar;

fn int(n: usize) -> K {
    K::from_i64(n as i64)
}

fn term(c: K, e: usize) -> Poly<K> {
    Poly::monomial(c, e)
}

/// Closed form of the partial derivative of `F` in one coefficient.
pub fn partial_polynomial(d: usize, zeta: &K, spec: PartialSpec) -> Poly<K> {
    assert!(d >= 2, "degree must be at least 2");
    spec.check(d);
    let dd = d * d;
    let zd = zeta.pow(d as u64);
    match spec {
        PartialSpec::GNum(k) => {
            term(int(d).mul(&zd).neg(), dd - d + k).add(&term(zeta.pow(k as u64).neg(), d * k))
        }
        PartialSpec::GDen(l) => term(zeta.pow((l + 1 + d) as u64), dd + l * d)
            .add(&term(int(d).mul(&zd.mul(zeta)), dd + l)),
        PartialSpec::FNum(i) => term(int(d), dd - d + i).add(&term(K::one(), i * d)),
        PartialSpec::FDen(j) => term(K::one().neg(), dd + j * d).add(&term(int(d).neg(), dd + j)),
    }
}

/// The same derivative obtained by iterating a map whose chosen coefficient
/// carries an infinitesimal, with no closed form involved.
pub fn partial_polynomial_by_iteration(d: usize, zeta: &K, spec: PartialSpec) -> Poly<K> {
    assert!(d >= 2, "degree must be at least 2");
    spec.check(d);
    let lead = |c: &K| {
        let mut num = vec![Dual::constant(K::zero()); d + 1];
        num[d] = Dual::constant(c.clone());
        let mut den = vec![Dual::constant(K::zero()); d + 1];
        den[0] = Dual::constant(K::one());
        (num, den)
    };
    let (is_f, base) = match spec {
        PartialSpec::FNum(_) | PartialSpec::FDen(_) => (true, K::one()),
        _ => (false, zeta.clone()),
    };
    let (mut num, mut den) = lead(&base);
    match spec {
        PartialSpec::GNum(k) | PartialSpec::FNum(k) => num[k].eps = K::one(),
        PartialSpec::GDen(k) | PartialSpec::FDen(k) => den[k].eps = K::one(),
    }
    let num = Poly::new(num);
    let den = Poly::new(den);
    let (x1, z1) = (
        num.homogeneous_substitute(d, &Poly::x(), &Poly::one()),
        den.homogeneous_substitute(d, &Poly::x(), &Poly::one()),
    );
    let x2 = num.homogeneous_substitute(d, &x1, &z1);
    let z2 = den.homogeneous_substitute(d, &x1, &z1);
    // Unperturbed, the second iterate has denominator 1, so the derivative
    // of X/Z is X' - X Z'.
    let part =
        |p: &Poly<Dual<K>>, eps: bool| p.map(|c| if eps { c.eps.clone() } else { c.re.clone() });
    debug_assert_eq!(part(&z2, false), Poly::one());
    let dq = part(&x2, true).sub(&part(&x2, false).mul(&part(&z2, true)));
    if is_f {
        dq
    } else {
        dq.neg()
    }
}

/// `(4d + 2) x (2d^2 + 1)` matrix: row `r` holds the coefficients of the
/// `r`-th partial in [`PartialSpec::all`] order; column `s` is the power `z^s`.
pub fn coefficient_matrix(d: usize, zeta: &K) -> ExactMatrix<K> {
    let cols = 2 * d * d + 1;
    let rows: Vec<Vec<K>> = PartialSpec::all(d)
        .into_iter()
        .map(|spec| {
            let p = partial_polynomial(d, zeta, spec);
            (0..cols).map(|s| p.coeff(s)).collect()
        })
        .collect();
    ExactMatrix::from_rows(rows).expect("rows have equal length")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub degree: usize,
    pub zeta_order: u32,
    pub rank: usize,
    pub expected: usize,
    pub rows: usize,
    pub cols: usize,
    pub pass: bool,
}

/// Exact rank at `zeta` of order `zeta_order`; it passes when the rank is `4d - 1`.
pub fn rank_with_order(d: usize, zeta_order: u32) -> RankCertificate {
    let zeta = K::zeta(zeta_order);
    let m = coefficient_matrix(d, &zeta);
    let rank = m.rank_exact();
    RankCertificate {
        degree: d,
        zeta_order,
        rank,
        expected: 4 * d - 1,
        rows: m.rows(),
        cols: m.cols(),
        pass: rank == 4 * d - 1,
    }
}

/// Rank at a primitive `(d+1)`-th root of unity.
pub fn rank_certificate(d: usize) -> RankCertificate {
    rank_with_order(d, d as u32 + 1)
}

/// Rank at `zeta` of exact order `m`, `1 <= m <= d`.
pub fn degenerate_rank(d: usize, m: u32) -> usize {
    assert!(m >= 1 && (m as usize) <= d, "order must lie in 1..=d");
    rank_with_order(d, m).rank
}

/// The `k` in `0..=d-2` with `zeta^d = zeta^k` for which the columns of
/// `z^((d-1)d+k)` and `z^(kd)` satisfy `col((d-1)d+k) = d col(kd)`.
pub fn column_relations(d: usize, m: u32) -> Vec<usize> {
    let zeta = K::zeta(m);
    let mat = coefficient_matrix(d, &zeta);
    let zd = zeta.pow(d as u64);
    (0..=d.saturating_sub(2))
        .filter(|&k| zeta.pow(k as u64) == zd)
        .filter(|&k| {
            let left = mat.column((d - 1) * d + k);
            let right: Vec<K> = mat.column(k * d).iter().map(|c| c.mul(&int(d))).collect();
            left == right
        })
        .collect()
}

/// Columns holding at least one nonzero entry.
pub fn nonzero_columns(m: &ExactMatrix<K>) -> Vec<usize> {
    (0..m.cols())
        .filter(|&c| m.column(c).iter().any(|x| !x.is_zero()))
        .collect()
}

/// `g o g = f o f = z^(d^2)` for `f = z^d`, `g = zeta z^d` with `zeta` of the given order.
pub fn second_iterate_identity(d: usize, zeta_order: u32) -> bool {
    let f = term(K::one(), d);
    let g = term(K::zeta(zeta_order), d);
    let ff = f.compose(&f);
    ff == term(K::one(), d * d) && g.compose(&g) == ff
}

/// For `f_c = z^(d-m) (z^m + c)` and `g_c = zeta f_c` with `zeta` of order `m`,
/// checks `g_c^n = zeta^(1 + d + ... + d^(n-1)) f_c^n` with `c` symbolic.
pub fn symmetry_family_identity(d: usize, m: usize, n: usize) -> bool {
    assert!(1 <= m && m <= d, "need 1 <= m <= d");
    let zeta = K::zeta(m as u32);
    let c = MPoly::var(0);
    let one = MPoly::one();
    let f: Poly<MPoly<K>> = Poly::monomial(one, d).add(&Poly::monomial(c, d - m));
    let g = f.scale(&MPoly::constant(zeta.clone()));
    let mut fn_ = Poly::x();
    let mut gn = Poly::x();
    let mut exp = 0u64;
    for i in 0..n {
        fn_ = f.compose(&fn_);
        gn = g.compose(&gn);
        exp += (d as u64).pow(i as u32);
    }
    gn == fn_.scale(&MPoly::constant(zeta.pow(exp)))
}
