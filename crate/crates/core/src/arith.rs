//! Two cocommutative workhorse instances.
//!
//! Positive integers under multiplication: basis e_n, product
//! e_m e_n = e_{mn}, coproduct splitting the prime multiset of n over the
//! two legs (a bipartition of prime *slots*, so repeated primes contribute
//! binomial multiplicities), grading by the number of prime factors counted
//! with multiplicity.  Primes are the primitive generators and the antipode
//! has the closed form S(e_n) = (-1)^{Omega(n)} e_n.
//!
//! The symmetric algebra on a finite set of graded generators: monomials as
//! multisets, generators primitive, coproduct by slot bipartition with the
//! same binomial multiplicities.

use crate::error::{Error, Result};
use crate::hopf::HopfInstance;
use crate::linear::{Element, TensorElement};
use crate::rational::{binomial, rat, Rational};
use std::collections::BTreeMap;
use std::fmt;

// ---------------------------------------------------------------------------
// Positive integers under multiplication
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntBasis(pub u64);

impl fmt::Display for IntBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Prime factorization by trial division, smallest prime first.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "only positive integers have a factorization here");
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0u32;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Number of prime factors counted with multiplicity (the grading).
pub fn omega(n: u64) -> u64 {
    factorize(n).iter().map(|(_, k)| *k as u64).sum()
}

/// Closed-form antipode: S(e_n) = (-1)^{Omega(n)} e_n.
pub fn int_antipode_closed_form(n: u64) -> Element<IntBasis> {
    let sign = if omega(n) % 2 == 0 { rat(1) } else { rat(-1) };
    Element::single(IntBasis(n), sign)
}

#[derive(Clone, Debug)]
pub struct Integers {
    /// Enumeration stops at this value of n; algebra operations are total.
    pub enumeration_bound: u64,
}

impl Integers {
    pub fn new(enumeration_bound: u64) -> Self {
        Integers { enumeration_bound }
    }
}

impl Default for Integers {
    fn default() -> Self {
        Integers { enumeration_bound: 64 }
    }
}

impl HopfInstance for Integers {
    type Basis = IntBasis;

    fn name(&self) -> String {
        "multiplicative integers".into()
    }

    fn unit(&self) -> IntBasis {
        IntBasis(1)
    }

    fn degree(&self, b: &IntBasis) -> u64 {
        omega(b.0)
    }

    fn product(&self, a: &IntBasis, b: &IntBasis) -> Element<IntBasis> {
        Element::basis(IntBasis(a.0 * b.0))
    }

    fn reduced_coproduct(&self, b: &IntBasis) -> TensorElement<IntBasis> {
        let n = b.0;
        let factors = factorize(n);
        let mut out = TensorElement::zero();
        // Enumerate divisors d with the number of slot bipartitions sending
        // exactly d to the left leg: prod_i C(a_i, b_i).
        let mut stack: Vec<(usize, u64, Rational)> = vec![(0, 1, rat(1))];
        while let Some((idx, d, mult)) = stack.pop() {
            if idx == factors.len() {
                if d != 1 && d != n {
                    out.add_term(IntBasis(d), IntBasis(n / d), mult);
                }
                continue;
            }
            let (p, a) = factors[idx];
            let mut pk = 1u64;
            for b_i in 0..=a {
                stack.push((idx + 1, d * pk, mult.clone() * binomial(a as u64, b_i as u64)));
                if b_i < a {
                    pk *= p;
                }
            }
        }
        out
    }

    fn generator_factors(&self, b: &IntBasis) -> Vec<IntBasis> {
        let mut out = Vec::new();
        for (p, k) in factorize(b.0) {
            for _ in 0..k {
                out.push(IntBasis(p));
            }
        }
        out
    }

    fn generators_of_degree(&self, n: u64) -> Vec<IntBasis> {
        if n != 1 {
            return Vec::new();
        }
        (2..=self.enumeration_bound)
            .filter(|m| factorize(*m).len() == 1 && factorize(*m)[0].1 == 1)
            .map(IntBasis)
            .collect()
    }

    fn basis_of_degree(&self, n: u64) -> Vec<IntBasis> {
        (1..=self.enumeration_bound)
            .filter(|m| omega(*m) == n)
            .map(IntBasis)
            .collect()
    }
}

pub fn parse_int_basis(input: &str) -> Result<IntBasis> {
    let s = input.trim();
    let digits = s
        .strip_prefix('e')
        .ok_or_else(|| Error::Parse(format!("expected e<n>, got {input:?}")))?;
    let n: u64 = digits
        .parse()
        .map_err(|e| Error::Parse(format!("bad integer in {input:?}: {e}")))?;
    if n == 0 {
        return Err(Error::Parse("e0 is not a basis element; indices start at 1".into()));
    }
    Ok(IntBasis(n))
}

// ---------------------------------------------------------------------------
// Symmetric algebra on graded generators
// ---------------------------------------------------------------------------

/// Monomial in commuting generators: generator id -> exponent (> 0).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub BTreeMap<u32, u32>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn generator(id: u32) -> Self {
        Monomial(BTreeMap::from_iter([(id, 1)]))
    }

    pub fn total_exponent(&self) -> u64 {
        self.0.values().map(|k| *k as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (id, k) in &other.0 {
            *out.entry(*id).or_insert(0) += k;
        }
        Monomial(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (id, k)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if *k == 1 {
                write!(f, "x{id}")?;
            } else {
                write!(f, "x{id}^{k}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SymmetricAlgebra {
    /// Generator id -> degree (>= 1).
    pub degrees: BTreeMap<u32, u64>,
}

impl SymmetricAlgebra {
    pub fn new(degrees: BTreeMap<u32, u64>) -> Self {
        assert!(degrees.values().all(|d| *d >= 1), "generator degrees must be >= 1");
        SymmetricAlgebra { degrees }
    }

    /// Generators x1..xk, all of degree 1.
    pub fn standard(k: u32) -> Self {
        Self::new((1..=k).map(|i| (i, 1)).collect())
    }

    pub fn check_monomial(&self, m: &Monomial) -> Result<()> {
        for id in m.0.keys() {
            if !self.degrees.contains_key(id) {
                return Err(Error::Parse(format!("unknown generator x{id}")));
            }
        }
        Ok(())
    }
}

/// Closed-form antipode: S(m) = (-1)^{total exponent} m.
pub fn sym_antipode_closed_form(m: &Monomial) -> Element<Monomial> {
    let sign = if m.total_exponent() % 2 == 0 { rat(1) } else { rat(-1) };
    Element::single(m.clone(), sign)
}

impl HopfInstance for SymmetricAlgebra {
    type Basis = Monomial;

    fn name(&self) -> String {
        "symmetric algebra".into()
    }

    fn unit(&self) -> Monomial {
        Monomial::unit()
    }

    fn degree(&self, b: &Monomial) -> u64 {
        b.0.iter()
            .map(|(id, k)| {
                self.degrees
                    .get(id)
                    .unwrap_or_else(|| panic!("unknown generator x{id}"))
                    * (*k as u64)
            })
            .sum()
    }

    fn product(&self, a: &Monomial, b: &Monomial) -> Element<Monomial> {
        Element::basis(a.mul(b))
    }

    fn reduced_coproduct(&self, b: &Monomial) -> TensorElement<Monomial> {
        let ids: Vec<(u32, u32)> = b.0.iter().map(|(id, k)| (*id, *k)).collect();
        let mut out = TensorElement::zero();
        let mut stack: Vec<(usize, Monomial, Rational)> =
            vec![(0, Monomial::unit(), rat(1))];
        while let Some((idx, left, mult)) = stack.pop() {
            if idx == ids.len() {
                if left.0.is_empty() || left == *b {
                    continue;
                }
                let mut right = b.0.clone();
                for (id, k) in &left.0 {
                    let e = right.get_mut(id).expect("left divides b");
                    *e -= k;
                    if *e == 0 {
                        right.remove(id);
                    }
                }
                out.add_term(left, Monomial(right), mult);
                continue;
            }
            let (id, a) = ids[idx];
            for k in 0..=a {
                let mut l = left.clone();
                if k > 0 {
                    l.0.insert(id, k);
                }
                stack.push((idx + 1, l, mult.clone() * binomial(a as u64, k as u64)));
            }
        }
        out
    }

    fn generator_factors(&self, b: &Monomial) -> Vec<Monomial> {
        let mut out = Vec::new();
        for (id, k) in &b.0 {
            for _ in 0..*k {
                out.push(Monomial::generator(*id));
            }
        }
        out
    }

    fn generators_of_degree(&self, n: u64) -> Vec<Monomial> {
        self.degrees
            .iter()
            .filter(|(_, d)| **d == n)
            .map(|(id, _)| Monomial::generator(*id))
            .collect()
    }

    fn basis_of_degree(&self, n: u64) -> Vec<Monomial> {
        let ids: Vec<(u32, u64)> = self.degrees.iter().map(|(id, d)| (*id, *d)).collect();
        let mut out = Vec::new();
        fn extend(
            ids: &[(u32, u64)],
            idx: usize,
            remaining: u64,
            current: &mut Monomial,
            out: &mut Vec<Monomial>,
        ) {
            if remaining == 0 {
                out.push(current.clone());
                return;
            }
            if idx == ids.len() {
                return;
            }
            let (id, d) = ids[idx];
            let max_k = remaining / d;
            for k in 0..=max_k {
                if k > 0 {
                    current.0.insert(id, k as u32);
                }
                extend(ids, idx + 1, remaining - k * d, current, out);
            }
            current.0.remove(&id);
        }
        extend(&ids, 0, n, &mut Monomial::unit(), &mut out);
        out.sort();
        out
    }
}

/// Parse a monomial literal: `1`, `x1`, `x2^3`, `x1^2 x2` (whitespace
/// between factors).
pub fn parse_monomial(input: &str) -> Result<Monomial> {
    let s = input.trim();
    if s == "1" {
        return Ok(Monomial::unit());
    }
    let mut m = Monomial::unit();
    for tok in s.split_whitespace() {
        let rest = tok
            .strip_prefix('x')
            .ok_or_else(|| Error::Parse(format!("expected x<i>[^k], got {tok:?}")))?;
        let (id_str, pow_str) = match rest.split_once('^') {
            Some((a, b)) => (a, Some(b)),
            None => (rest, None),
        };
        let id: u32 = id_str
            .parse()
            .map_err(|e| Error::Parse(format!("bad generator index in {tok:?}: {e}")))?;
        let k: u32 = match pow_str {
            Some(p) => p
                .parse()
                .map_err(|e| Error::Parse(format!("bad exponent in {tok:?}: {e}")))?,
            None => 1,
        };
        if k == 0 {
            return Err(Error::Parse(format!("zero exponent in {tok:?}")));
        }
        *m.0.entry(id).or_insert(0) += k;
    }
    Ok(m)
}
