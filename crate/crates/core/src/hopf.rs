//! Generic engine for connected graded Hopf algebras presented by a basis.
//!
//! An instance supplies the combinatorics: a canonical basis with a grading,
//! the product and reduced coproduct on basis elements, and deterministic
//! enumeration per degree.  Everything else — full coproduct, iterated
//! reduced coproducts, counit, antipode, axiom checking — is derived here,
//! uniformly for all instances.
//!
//! The antipode comes from the recursion S(x) = -x - sum S(x') x'' over the
//! reduced coproduct (and its mirror using x' S(x''), kept as an independent
//! cross-check route).  Termination is guaranteed by connectivity: reduced
//! coproducts strictly lower the degree of every leg.  Results are memoized
//! per context, keyed by the canonical basis element.

use crate::error::{Error, Result};
use crate::linear::{Element, MultiTensor, TensorElement};
use crate::rational::{rat, Rational};
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::sync::{Arc, RwLock};

pub trait HopfInstance: Send + Sync + 'static {
    type Basis: Clone + Ord + Eq + Hash + Debug + Display + Send + Sync + 'static;

    /// Stable instance name (used in reports and CLI output).
    fn name(&self) -> String;

    /// The group-like unit basis element (degree 0).
    fn unit(&self) -> Self::Basis;

    fn degree(&self, b: &Self::Basis) -> u64;

    /// Product of two basis elements as a linear combination.
    fn product(&self, a: &Self::Basis, b: &Self::Basis) -> Element<Self::Basis>;

    /// Reduced coproduct: the coproduct minus its primitive part
    /// `b (x) 1 + 1 (x) b`.  Every leg has degree strictly between 0 and |b|.
    fn reduced_coproduct(&self, b: &Self::Basis) -> TensorElement<Self::Basis>;

    /// Factorization of a basis element into algebra generators (empty for
    /// the unit).  Multiplying the factors back reproduces the element.
    fn generator_factors(&self, b: &Self::Basis) -> Vec<Self::Basis>;

    /// Algebra generators of the given degree, deterministically ordered.
    fn generators_of_degree(&self, n: u64) -> Vec<Self::Basis>;

    /// All basis elements of the given degree, deterministically ordered.
    fn basis_of_degree(&self, n: u64) -> Vec<Self::Basis>;
}

/// Shared evaluation context: the instance, the default precision bound used
/// by transcendental scalar operations, and per-basis memo tables.
pub struct Context<I: HopfInstance> {
    pub instance: I,
    pub precision: i64,
    delta_cache: RwLock<HashMap<I::Basis, TensorElement<I::Basis>>>,
    antipode_cache: RwLock<HashMap<I::Basis, Element<I::Basis>>>,
    antipode_right_cache: RwLock<HashMap<I::Basis, Element<I::Basis>>>,
}

pub type Ctx<I> = Arc<Context<I>>;

pub const DEFAULT_PRECISION: i64 = 8;

impl<I: HopfInstance> Context<I> {
    pub fn new(instance: I, precision: i64) -> Ctx<I> {
        Arc::new(Context {
            instance,
            precision,
            delta_cache: RwLock::new(HashMap::new()),
            antipode_cache: RwLock::new(HashMap::new()),
            antipode_right_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn with_default_precision(instance: I) -> Ctx<I> {
        Self::new(instance, DEFAULT_PRECISION)
    }

    // -- basic structure -----------------------------------------------------

    pub fn unit_element(&self) -> Element<I::Basis> {
        Element::basis(self.instance.unit())
    }

    pub fn is_unit(&self, b: &I::Basis) -> bool {
        *b == self.instance.unit()
    }

    /// Memoized reduced coproduct of a basis element.
    pub fn reduced_coproduct_basis(&self, b: &I::Basis) -> TensorElement<I::Basis> {
        if let Some(hit) = self.delta_cache.read().unwrap().get(b) {
            return hit.clone();
        }
        let value = if self.is_unit(b) {
            TensorElement::zero()
        } else {
            self.instance.reduced_coproduct(b)
        };
        self.delta_cache.write().unwrap().insert(b.clone(), value.clone());
        value
    }

    /// Full coproduct of a basis element, `b (x) 1 + 1 (x) b + reduced` for
    /// non-unit `b` and `1 (x) 1` for the unit.
    pub fn coproduct_basis(&self, b: &I::Basis) -> TensorElement<I::Basis> {
        let one = self.instance.unit();
        if self.is_unit(b) {
            return TensorElement::single(one.clone(), one, rat(1));
        }
        let mut t = self.reduced_coproduct_basis(b);
        t.add_term(b.clone(), one.clone(), rat(1));
        t.add_term(one, b.clone(), rat(1));
        t
    }

    pub fn coproduct(&self, x: &Element<I::Basis>) -> TensorElement<I::Basis> {
        let mut out = TensorElement::zero();
        for (b, c) in x.terms() {
            out = out.add(&self.coproduct_basis(b).scale(c));
        }
        out
    }

    /// Counit: the coefficient of the unit basis element.
    pub fn counit(&self, x: &Element<I::Basis>) -> Rational {
        x.coeff(&self.instance.unit())
    }

    /// Iterated reduced coproduct with `k` applications, a combination of
    /// (k+1)-tuples.  Defined only away from the unit: elements with a unit
    /// component are rejected.
    pub fn iterated_reduced_coproduct(
        &self,
        x: &Element<I::Basis>,
        k: usize,
    ) -> Result<MultiTensor<I::Basis>> {
        if !self.counit(x).is_zero() {
            return Err(Error::UnitComponent);
        }
        let mut acc = MultiTensor::zero();
        for (b, c) in x.terms() {
            acc.add_term(vec![b.clone()], c.clone());
        }
        for _ in 0..k {
            let mut next = MultiTensor::zero();
            for (legs, c) in acc.terms() {
                // Expand the rightmost leg; coassociativity makes the choice
                // immaterial.
                let last = legs.last().expect("nonempty tuple");
                for ((l, r), d) in self.reduced_coproduct_basis(last).terms() {
                    let mut tuple = legs[..legs.len() - 1].to_vec();
                    tuple.push(l.clone());
                    tuple.push(r.clone());
                    next.add_term(tuple, c * d);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Degree at which every iterated reduced coproduct of `b` vanishes:
    /// `reduced^k (b) = 0` whenever `k >= |b|`.
    pub fn reduced_power_vanishes(&self, b: &I::Basis, k: usize) -> Result<bool> {
        if self.is_unit(b) {
            return Err(Error::UnitComponent);
        }
        let it = self.iterated_reduced_coproduct(&Element::basis(b.clone()), k)?;
        Ok(it.is_zero())
    }

    // -- products ------------------------------------------------------------

    pub fn mul_elements(&self, x: &Element<I::Basis>, y: &Element<I::Basis>) -> Element<I::Basis> {
        let mut out = Element::zero();
        for (a, ca) in x.terms() {
            for (b, cb) in y.terms() {
                out = out.add(&self.instance.product(a, b).scale(&(ca * cb)));
            }
        }
        out
    }

    /// Componentwise product of two-fold tensors:
    /// `(a (x) b)(c (x) d) = ac (x) bd`.
    pub fn mul_tensors(
        &self,
        x: &TensorElement<I::Basis>,
        y: &TensorElement<I::Basis>,
    ) -> TensorElement<I::Basis> {
        let mut out = TensorElement::zero();
        for ((al, ar), ca) in x.terms() {
            for ((bl, br), cb) in y.terms() {
                let left = self.instance.product(al, bl);
                let right = self.instance.product(ar, br);
                let c = ca * cb;
                for (l, cl) in left.terms() {
                    for (r, cr) in right.terms() {
                        out.add_term(l.clone(), r.clone(), &c * cl * cr);
                    }
                }
            }
        }
        out
    }

    // -- antipode ------------------------------------------------------------

    /// Antipode on a basis element via the left recursion
    /// `S(b) = -b - sum S(b') b''`, memoized.
    pub fn antipode_basis(&self, b: &I::Basis) -> Element<I::Basis> {
        if let Some(hit) = self.antipode_cache.read().unwrap().get(b) {
            return hit.clone();
        }
        let value = if self.is_unit(b) {
            self.unit_element()
        } else {
            let mut acc = Element::single(b.clone(), rat(-1));
            for ((l, r), c) in self.reduced_coproduct_basis(b).terms() {
                let s_l = self.antipode_basis(l);
                let prod = self.mul_elements(&s_l, &Element::basis(r.clone()));
                acc = acc.add(&prod.scale(&-c.clone()));
            }
            acc
        };
        self.antipode_cache.write().unwrap().insert(b.clone(), value.clone());
        value
    }

    /// Antipode via the mirror recursion `S(b) = -b - sum b' S(b'')`,
    /// memoized separately; agreement with the left route is a theorem, so
    /// this serves as an independent implementation for cross-checks.
    pub fn antipode_basis_right(&self, b: &I::Basis) -> Element<I::Basis> {
        if let Some(hit) = self.antipode_right_cache.read().unwrap().get(b) {
            return hit.clone();
        }
        let value = if self.is_unit(b) {
            self.unit_element()
        } else {
            let mut acc = Element::single(b.clone(), rat(-1));
            for ((l, r), c) in self.reduced_coproduct_basis(b).terms() {
                let s_r = self.antipode_basis_right(r);
                let prod = self.mul_elements(&Element::basis(l.clone()), &s_r);
                acc = acc.add(&prod.scale(&-c.clone()));
            }
            acc
        };
        self.antipode_right_cache.write().unwrap().insert(b.clone(), value.clone());
        value
    }

    pub fn antipode(&self, x: &Element<I::Basis>) -> Element<I::Basis> {
        let mut out = Element::zero();
        for (b, c) in x.terms() {
            out = out.add(&self.antipode_basis(b).scale(c));
        }
        out
    }

    pub fn antipode_right(&self, x: &Element<I::Basis>) -> Element<I::Basis> {
        let mut out = Element::zero();
        for (b, c) in x.terms() {
            out = out.add(&self.antipode_basis_right(b).scale(c));
        }
        out
    }

    /// Check `m (S (x) id) coproduct(x) = counit(x) 1 = m (id (x) S) coproduct(x)`.
    pub fn antipode_convolution_identity(&self, x: &Element<I::Basis>) -> bool {
        let expected = self.unit_element().scale(&self.counit(x));
        let delta = self.coproduct(x);
        let mut left = Element::zero();
        let mut right = Element::zero();
        for ((l, r), c) in delta.terms() {
            left = left.add(
                &self
                    .mul_elements(&self.antipode_basis(l), &Element::basis(r.clone()))
                    .scale(c),
            );
            right = right.add(
                &self
                    .mul_elements(&Element::basis(l.clone()), &self.antipode_basis(r))
                    .scale(c),
            );
        }
        left == expected && right == expected
    }

    // -- enumeration ---------------------------------------------------------

    pub fn basis_up_to(&self, max_degree: u64) -> Vec<I::Basis> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            out.extend(self.instance.basis_of_degree(d));
        }
        out
    }

    // -- axiom suite ---------------------------------------------------------

    /// Run the full axiom suite on every basis element (and pair) up to the
    /// given degree.  Failures are reported, not thrown.
    pub fn check_hopf_axioms(&self, max_degree: u64) -> AxiomReport {
        let mut report = AxiomReport::default();
        let basis = self.basis_up_to(max_degree);
        let one = self.instance.unit();

        for b in &basis {
            let nb = self.instance.degree(b);
            let delta = self.coproduct_basis(b);

            // Counit axiom on both legs.
            let mut left = Element::zero();
            let mut right = Element::zero();
            for ((l, r), c) in delta.terms() {
                if *l == one {
                    left.add_term(r.clone(), c.clone());
                }
                if *r == one {
                    right.add_term(l.clone(), c.clone());
                }
            }
            let expected = Element::basis(b.clone());
            report.record(
                left == expected && right == expected,
                || format!("counit axiom fails on {b} in {}", self.instance.name()),
            );

            // Grading and properness of the reduced coproduct.
            let mut graded_ok = true;
            for ((l, r), _) in self.reduced_coproduct_basis(b).terms() {
                let dl = self.instance.degree(l);
                let dr = self.instance.degree(r);
                if dl == 0 || dr == 0 || dl + dr != nb {
                    graded_ok = false;
                }
            }
            report.record(graded_ok, || {
                format!("reduced coproduct of {b} violates the grading in {}", self.instance.name())
            });

            // Coassociativity via both composites.
            let lhs = self.expand_left(&delta);
            let rhs = self.expand_right(&delta);
            report.record(lhs == rhs, || {
                format!("coassociativity fails on {b} in {}", self.instance.name())
            });

            // Antipode axiom.
            report.record(self.antipode_convolution_identity(&Element::basis(b.clone())), || {
                format!("antipode axiom fails on {b} in {}", self.instance.name())
            });

            // Vanishing certificate for iterated reduced coproducts.
            if *b != one {
                let vanish = self
                    .reduced_power_vanishes(b, nb as usize)
                    .unwrap_or(false);
                report.record(vanish, || {
                    format!(
                        "iterated reduced coproduct fails to vanish at order {} on {b} in {}",
                        nb,
                        self.instance.name()
                    )
                });
            }
        }

        // Algebra-morphism compatibility and product grading on pairs.
        for a in &basis {
            let da = self.instance.degree(a);
            for b in &basis {
                let db = self.instance.degree(b);
                if da + db > max_degree {
                    continue;
                }
                let prod = self.instance.product(a, b);
                let mut grading_ok = true;
                for (m, _) in prod.terms() {
                    if self.instance.degree(m) != da + db {
                        grading_ok = false;
                    }
                }
                report.record(grading_ok, || {
                    format!("product of {a} and {b} violates the grading in {}", self.instance.name())
                });
                let lhs = self.coproduct(&prod);
                let rhs = self.mul_tensors(&self.coproduct_basis(a), &self.coproduct_basis(b));
                report.record(lhs == rhs, || {
                    format!(
                        "coproduct is not multiplicative on {a} and {b} in {}",
                        self.instance.name()
                    )
                });
            }
        }

        report
    }

    fn expand_left(&self, t: &TensorElement<I::Basis>) -> MultiTensor<I::Basis> {
        let mut out = MultiTensor::zero();
        for ((l, r), c) in t.terms() {
            for ((a, b), d) in self.coproduct_basis(l).terms() {
                out.add_term(vec![a.clone(), b.clone(), r.clone()], c * d);
            }
        }
        out
    }

    fn expand_right(&self, t: &TensorElement<I::Basis>) -> MultiTensor<I::Basis> {
        let mut out = MultiTensor::zero();
        for ((l, r), c) in t.terms() {
            for ((a, b), d) in self.coproduct_basis(r).terms() {
                out.add_term(vec![l.clone(), a.clone(), b.clone()], c * d);
            }
        }
        out
    }
}

/// Outcome of an axiom suite: count of checks, failures collected as
/// human-readable witnesses (capped), first failure kept verbatim.
#[derive(Debug, Default, Clone)]
pub struct AxiomReport {
    pub checks_run: usize,
    pub failures: Vec<String>,
}

const MAX_RECORDED_FAILURES: usize = 16;

impl AxiomReport {
    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checks_run += 1;
        if !ok && self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.failures.first().map(|s| s.as_str())
    }
}
