//! Sparse multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Ring;

/// Exponent vector with trailing zeros stripped, so `x0` and `x0 * x1^0` share a key.
pub type Monomial = Vec<u32>;

fn canonical(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    canonical(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Monomial> {
    if b.len() > a.len() {
        if b[a.len()..].iter().any(|&e| e > 0) {
            return None;
        }
    }
    let mut out = Vec::with_capacity(a.len());
    for (i, &ea) in a.iter().enumerate() {
        let eb = b.get(i).copied().unwrap_or(0);
        if eb > ea {
            return None;
        }
        out.push(ea - eb);
    }
    Some(canonical(out))
}

/// Polynomial in any number of variables. The variable count is implicit, so
/// `zero()` and `one()` need no context. Terms are ordered lexicographically
/// with `x0 > x1 > ...`.
#[derive(Clone, PartialEq, Debug)]
pub struct MPoly<R: Ring> {
    terms: BTreeMap<Monomial, R>,
}

impl<R: Ring> MPoly<R> {
    pub fn constant(c: R) -> Self {
        Self::term(c, vec![])
    }

    /// The variable `x_i`.
    pub fn var(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Self::term(R::one(), m)
    }

    pub fn term(c: R, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(canonical(m), c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &R)> {
        self.terms.iter()
    }

    /// One past the highest variable index that occurs.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// True if `x_i` occurs in some term.
    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.get(i).is_some_and(|&e| e > 0))
    }

    /// The constant term when the polynomial is constant.
    pub fn as_constant(&self) -> Option<R> {
        match self.terms.len() {
            0 => Some(R::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    fn insert_add(terms: &mut BTreeMap<Monomial, R>, m: Monomial, c: R) {
        use std::collections::btree_map::Entry;
        match terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, s: &R) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.mul(s);
            if !v.is_zero() {
                terms.insert(m.clone(), v);
            }
        }
        MPoly { terms }
    }

    /// Evaluate with coefficients mapped into the target ring by `embed`.
    pub fn eval_with<S: Ring>(&self, point: &[S], embed: impl Fn(&R) -> S) -> S {
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&point[i].pow(e as u64));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn eval(&self, point: &[R]) -> R {
        self.eval_with(point, |c| c.clone())
    }

    /// Formal partial derivative in `x_i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.get(i).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            Self::insert_add(&mut terms, canonical(m2), c.mul(&R::from_i64(e as i64)));
        }
        MPoly { terms }
    }

    /// Substitute values for some variables, keeping the others symbolic.
    pub fn substitute(&self, values: &[(usize, R)]) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let mut coef = c.clone();
            for (i, v) in values {
                if let Some(e) = m2.get_mut(*i) {
                    if *e > 0 {
                        coef = coef.mul(&v.pow(*e as u64));
                        *e = 0;
                    }
                }
            }
            Self::insert_add(&mut terms, canonical(m2), coef);
        }
        MPoly { terms }
    }

    fn leading(&self) -> Option<(&Monomial, &R)> {
        self.terms.iter().next_back()
    }
}

impl<R: Ring> Ring for MPoly<R> {
    fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut terms, m.clone(), c.clone());
        }
        MPoly { terms }
    }
    fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            Self::insert_add(&mut terms, m.clone(), c.neg());
        }
        MPoly { terms }
    }
    fn mul(&self, other: &Self) -> Self {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                Self::insert_add(&mut terms, mono_mul(ma, mb), ca.mul(cb));
            }
        }
        MPoly { terms }
    }
    fn neg(&self) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }
    fn from_i64(n: i64) -> Self {
        Self::constant(R::from_i64(n))
    }
    /// Multivariate long division in lex order; fails on any nonzero remainder.
    fn try_div_exact(&self, other: &Self) -> Option<Self> {
        let (lm, lc) = other.leading()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = mono_div(m, &lm)?;
            let qc = c.try_div_exact(&lc)?;
            let t = Self::term(qc, qm);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for MPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*s{i}")?,
                    _ => write!(f, "*s{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}
