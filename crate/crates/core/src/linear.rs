//! Linear combinations over an ordered basis: elements, two-fold tensors,
//! and general k-fold tensors.  Zero coefficients are never stored, so
//! structural equality is equality of elements.

use crate::rational::{rat, render_rational, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element<B: Ord> {
    terms: BTreeMap<B, Rational>,
}

impl<B: Ord + Clone> Element<B> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn basis(b: B) -> Self {
        Element { terms: BTreeMap::from_iter([(b, rat(1))]) }
    }

    pub fn single(b: B, c: Rational) -> Self {
        let mut e = Self::zero();
        e.add_term(b, c);
        e
    }

    pub fn add_term(&mut self, b: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(b.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(b.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Element { terms: self.terms.iter().map(|(b, v)| (b.clone(), v * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&rat(-1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: &B) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&B, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (B, Rational)> {
        self.terms.into_iter()
    }

    pub fn from_terms<I: IntoIterator<Item = (B, Rational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (b, c) in terms {
            e.add_term(b, c);
        }
        e
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement<B: Ord> {
    terms: BTreeMap<(B, B), Rational>,
}

impl<B: Ord + Clone> TensorElement<B> {
    pub fn zero() -> Self {
        TensorElement { terms: BTreeMap::new() }
    }

    pub fn single(l: B, r: B, c: Rational) -> Self {
        let mut t = Self::zero();
        t.add_term(l, r, c);
        t
    }

    pub fn add_term(&mut self, l: B, r: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        TensorElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, l: &B, r: &B) -> Rational {
        self.terms.get(&(l.clone(), r.clone())).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(B, B), &Rational)> {
        self.terms.iter()
    }

    /// Swap the two legs (used by cocommutativity checks).
    pub fn flip(&self) -> Self {
        let mut out = Self::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }
}

/// Linear combination of k-tuples of basis elements (all tuples in one value
/// share the same arity in practice, but this is not enforced structurally).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiTensor<B: Ord> {
    terms: BTreeMap<Vec<B>, Rational>,
}

impl<B: Ord + Clone> MultiTensor<B> {
    pub fn zero() -> Self {
        MultiTensor { terms: BTreeMap::new() }
    }

    pub fn single(legs: Vec<B>, c: Rational) -> Self {
        let mut t = Self::zero();
        t.add_term(legs, c);
        t
    }

    pub fn add_term(&mut self, legs: Vec<B>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(legs.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&legs);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<B>, &Rational)> {
        self.terms.iter()
    }
}

/// Render an element with `Display` basis keys, deterministically ordered.
pub fn render_element<B: Ord + Clone + std::fmt::Display>(e: &Element<B>) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (b, c)) in e.terms().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag == rat(1) {
            out.push_str(&b.to_string());
        } else {
            out.push_str(&format!("{}*{}", render_rational(&mag), b));
        }
    }
    out
}

/// Render a two-fold tensor, `c*(l (x) r)` terms joined by signs.
pub fn render_tensor<B: Ord + Clone + std::fmt::Display>(t: &TensorElement<B>) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, ((l, r), c)) in t.terms().enumerate() {
        let neg = c < &Rational::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag == rat(1) {
            out.push_str(&format!("({l}) (x) ({r})"));
        } else {
            out.push_str(&format!("{}*({l}) (x) ({r})", render_rational(&mag)));
        }
    }
    out
}
