//! Kernel eigenvectors of altans: the local condition, the special vector,
//! the alternating functionals over attachment and y-vertices, and the
//! extension / contraction maps between `ker A(G)` and `ker A(altan(G, H))`.

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{AltanPair, AttachmentSet, Graph, GraphError};
use crate::linalg::{adjacency_matrix, kernel_basis, nullity, RationalVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("weighting has {got} entries but the graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("attachment set has odd length {0}; the special vector needs even length")]
    OddAttachment(usize),
    #[error("kernel vector is not extendable: alternating sum over the attachment set is {obstruction}")]
    NotExtendable { obstruction: BigRational },
    #[error("vector is not in the kernel of the adjacency matrix")]
    NotAKernelVector,
    #[error("vector is nonzero on x-vertex {vertex}; it does not contract")]
    NotContractible { vertex: usize },
    #[error("pair has level 0; no altan step to refer to")]
    LevelZero,
    #[error("nullity bound violated: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An exact rational value on every vertex of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexWeighting {
    values: RationalVector,
}

impl VertexWeighting {
    pub fn new(values: RationalVector, host: &Graph) -> Result<VertexWeighting, KernelError> {
        if values.len() != host.order() {
            return Err(KernelError::LengthMismatch {
                expected: host.order(),
                got: values.len(),
            });
        }
        Ok(VertexWeighting { values })
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(
        values: I,
        host: &Graph,
    ) -> Result<VertexWeighting, KernelError> {
        VertexWeighting::new(RationalVector::from_integers(values), host)
    }

    pub fn zeros(n: usize) -> VertexWeighting {
        VertexWeighting {
            values: RationalVector::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> &BigRational {
        self.values.get(v)
    }

    pub fn values(&self) -> &RationalVector {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_zero()
    }

    pub fn add(&self, other: &VertexWeighting) -> VertexWeighting {
        VertexWeighting {
            values: self.values.add(&other.values),
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> VertexWeighting {
        VertexWeighting {
            values: self.values.scaled(factor),
        }
    }

    /// Integer entries with gcd 1 and the first nonzero entry positive.
    pub fn primitive(&self) -> Vec<BigInt> {
        self.values.primitive()
    }

    /// Entries of the primitive form as decimal strings, the JSON export shape.
    pub fn to_json_strings(&self) -> Vec<String> {
        self.primitive().iter().map(ToString::to_string).collect()
    }

    /// Per-vertex labels for DOT output.
    pub fn labels(&self) -> Vec<String> {
        self.values.entries().iter().map(ToString::to_string).collect()
    }

    fn check_host(&self, host: &Graph) -> Result<(), KernelError> {
        if self.len() != host.order() {
            return Err(KernelError::LengthMismatch {
                expected: host.order(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// Nullities of a parent graph and its altan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessReport {
    pub parent_nullity: usize,
    pub altan_nullity: usize,
    pub excess: i64,
    pub h_parity: Parity,
}

impl ExcessReport {
    /// Checks `0 <= excess <= 2` for even `h` and `excess == 0` for odd `h`.
    pub fn check_window(&self) -> Result<(), KernelError> {
        let ok = match self.h_parity {
            Parity::Even => (0..=2).contains(&self.excess),
            Parity::Odd => self.excess == 0,
        };
        if ok {
            Ok(())
        } else {
            Err(KernelError::TheoremViolation(format!(
                "parent nullity {}, altan nullity {}, h {}",
                self.parent_nullity, self.altan_nullity, self.h_parity
            )))
        }
    }
}

/// `lambda * q(v) == sum of q(u) over neighbours u of v`, at every vertex.
pub fn check_local_condition(g: &Graph, q: &VertexWeighting, lambda: &BigRational) -> bool {
    if q.len() != g.order() {
        return false;
    }
    (0..g.order()).all(|v| {
        let sum = g
            .neighbors(v)
            .iter()
            .fold(BigRational::zero(), |acc, &u| acc + q.get(u));
        lambda * q.get(v) == sum
    })
}

pub fn is_kernel_vector(g: &Graph, q: &VertexWeighting) -> bool {
    check_local_condition(g, q, &BigRational::zero())
}

/// Exact kernel basis of `A(G)` as weightings.
pub fn kernel_weightings(g: &Graph) -> Vec<VertexWeighting> {
    kernel_basis(&adjacency_matrix(g))
        .into_iter()
        .map(|values| VertexWeighting { values })
        .collect()
}

fn last_step(pair: &AltanPair) -> Result<(Range<usize>, Range<usize>), KernelError> {
    if pair.level == 0 {
        return Err(KernelError::LevelZero);
    }
    Ok((pair.x_range.clone(), pair.y_range.clone()))
}

/// `+1` on `y_i` for even `i`, `-1` on `y_i` for odd `i` (1-based, most
/// recent step), zero elsewhere. Certified against the local condition.
pub fn special_vector(pair: &AltanPair) -> Result<VertexWeighting, KernelError> {
    let (_, ys) = last_step(pair)?;
    let h = ys.len();
    if h % 2 == 1 {
        return Err(KernelError::OddAttachment(h));
    }
    let mut values = RationalVector::zeros(pair.graph.order());
    for (k, y) in ys.enumerate() {
        let i = k + 1;
        let sign = if i % 2 == 0 { 1 } else { -1 };
        values.set(y, BigRational::from_integer(BigInt::from(sign)));
    }
    let s = VertexWeighting { values };
    if !is_kernel_vector(&pair.graph, &s) {
        return Err(KernelError::NotAKernelVector);
    }
    Ok(s)
}

fn alternating_sum<'a, I: IntoIterator<Item = &'a usize>>(q: &VertexWeighting, vertices: I) -> BigRational {
    vertices
        .into_iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (k, &v)| {
            // index i = k + 1 carries sign (-1)^i
            if k % 2 == 0 {
                acc - q.get(v)
            } else {
                acc + q.get(v)
            }
        })
}

/// `sum_{i=1..h} (-1)^i q(v_i)` over the attachment tuple in stored order.
/// A parent kernel vector extends to the altan of an even attachment set
/// exactly when this vanishes.
pub fn functional_c(q: &VertexWeighting, h: &AttachmentSet) -> BigRational {
    alternating_sum(q, h.vertices())
}

/// `sum_{i=1..h} (-1)^i q(y_i)` over a y-block.
pub fn functional_d(q: &VertexWeighting, y_block: &[usize]) -> BigRational {
    alternating_sum(q, y_block)
}

/// Extends a kernel vector of `pair.graph` to the kernel of its altan.
///
/// Parent values are copied, every `x_i` gets zero and `y_h = t`; the other
/// y-values follow from the local condition at `x_1 .. x_{h-1}`. For odd `h`
/// the parameter is forced to `C(q) / 2` and `t` is ignored. For even `h` the
/// extension exists iff `C(q) = 0`, and `t` (default 0) picks a member of the
/// affine family.
pub fn extend_kernel_vector(
    pair: &AltanPair,
    q: &VertexWeighting,
    t: Option<BigRational>,
) -> Result<VertexWeighting, KernelError> {
    q.check_host(&pair.graph)?;
    if !is_kernel_vector(&pair.graph, q) {
        return Err(KernelError::NotAKernelVector);
    }
    let h = pair.h();
    let c = functional_c(q, &pair.attachment);
    let t = if h % 2 == 1 {
        c / BigRational::from_integer(BigInt::from(2))
    } else if c.is_zero() {
        t.unwrap_or_else(BigRational::zero)
    } else {
        return Err(KernelError::NotExtendable { obstruction: c });
    };
    let altan = pair.altan()?;
    let mut values = RationalVector::zeros(altan.graph.order());
    for v in 0..pair.graph.order() {
        values.set(v, q.get(v).clone());
    }
    // y_0 is y_h
    let mut prev_y = t.clone();
    for (k, &v) in pair.attachment.vertices().iter().enumerate().take(h - 1) {
        let y = -q.get(v) - &prev_y;
        values.set(altan.y(k + 1), y.clone());
        prev_y = y;
    }
    values.set(altan.y(h), t);
    let extended = VertexWeighting { values };
    if !is_kernel_vector(&altan.graph, &extended) {
        return Err(KernelError::NotAKernelVector);
    }
    Ok(extended)
}

/// Restricts a kernel vector of an altan to the parent vertex set, provided
/// it vanishes on every x-vertex of the most recent step.
pub fn contract_kernel_vector(
    pair: &AltanPair,
    q: &VertexWeighting,
) -> Result<VertexWeighting, KernelError> {
    let (xs, _) = last_step(pair)?;
    q.check_host(&pair.graph)?;
    if !is_kernel_vector(&pair.graph, q) {
        return Err(KernelError::NotAKernelVector);
    }
    if let Some(vertex) = xs.clone().find(|&x| !q.get(x).is_zero()) {
        return Err(KernelError::NotContractible { vertex });
    }
    let parent_order = xs.start;
    let values = RationalVector::new(q.values.entries()[..parent_order].to_vec());
    let contracted = VertexWeighting { values };
    let parent = pair.graph.induced(&(0..parent_order).collect::<Vec<_>>());
    if !is_kernel_vector(&parent, &contracted) {
        return Err(KernelError::NotAKernelVector);
    }
    Ok(contracted)
}

/// Rebases a kernel basis so that at most one member fails to extend: the
/// first non-extendable vector `q1` is moved to the front and every other
/// `q_k` becomes `q_k - (C(q_k) / C(q1)) q1`. Returns the input order
/// unchanged when every vector already extends.
pub fn rebase_basis(basis: &[VertexWeighting], h: &AttachmentSet) -> Vec<VertexWeighting> {
    let Some(pos) = basis.iter().position(|q| !functional_c(q, h).is_zero()) else {
        return basis.to_vec();
    };
    let first = &basis[pos];
    let c1 = functional_c(first, h);
    let mut out = vec![first.clone()];
    for (k, q) in basis.iter().enumerate() {
        if k == pos {
            continue;
        }
        let lambda = -functional_c(q, h) / &c1;
        out.push(q.add(&first.scaled(&lambda)));
    }
    out
}

/// Exact nullities of the parent and its altan, checked against the
/// `{0, 1, 2}` (even `h`) / `{0}` (odd `h`) excess window.
pub fn excess_nullity(pair: &AltanPair) -> Result<ExcessReport, KernelError> {
    let altan = pair.altan()?;
    let parent_nullity = nullity(&pair.graph);
    let altan_nullity = nullity(&altan.graph);
    let report = ExcessReport {
        parent_nullity,
        altan_nullity,
        excess: altan_nullity as i64 - parent_nullity as i64,
        h_parity: Parity::of(pair.h()),
    };
    report.check_window()?;
    Ok(report)
}

/// Nullities of `altan^1 .. altan^k_max`.
pub fn iterated_nullities(pair: &AltanPair, k_max: usize) -> Result<Vec<usize>, KernelError> {
    let mut out = Vec::with_capacity(k_max);
    let mut current = pair.clone();
    for _ in 0..k_max {
        current = current.altan()?;
        out.push(nullity(&current.graph));
    }
    Ok(out)
}

/// True iff every iterated altan up to `k_max` has the nullity of the first.
pub fn verify_iterated_stability(pair: &AltanPair, k_max: usize) -> Result<bool, KernelError> {
    let k_max = k_max.max(2);
    let values = iterated_nullities(pair, k_max)?;
    Ok(values.iter().all(|&v| v == values[0]))
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path_graph;

    fn p3_pair(h: Vec<usize>) -> AltanPair {
        let g = path_graph(3);
        let h = AttachmentSet::new(h, &g).unwrap();
        AltanPair::new(g, h).unwrap()
    }

    fn p3_vector() -> VertexWeighting {
        VertexWeighting::from_integers([1, 0, -1], &path_graph(3)).unwrap()
    }

    #[test]
    fn local_condition_examples() {
        let p3 = path_graph(3);
        assert!(check_local_condition(&p3, &p3_vector(), &rational(0)));
        let ones = VertexWeighting::from_integers([1, 1, 1], &p3).unwrap();
        assert!(!check_local_condition(&p3, &ones, &rational(0)));
        let c4 = crate::graph::cycle_graph(4);
        let alt = VertexWeighting::from_integers([1, -1, 1, -1], &c4).unwrap();
        assert!(!check_local_condition(&c4, &alt, &rational(0)));
        let k = VertexWeighting::from_integers([1, 0, -1, 0], &c4).unwrap();
        assert!(check_local_condition(&c4, &k, &rational(0)));
        // eigenvalue -2 of C4 has the alternating vector as eigenvector
        assert!(check_local_condition(&c4, &alt, &rational(-2)));
    }

    #[test]
    fn special_vector_on_p3_h4() {
        let a = p3_pair(vec![0, 0, 2, 2]).altan().unwrap();
        let s = special_vector(&a).unwrap();
        let expected: Vec<i64> = vec![0, 0, 0, 0, 0, 0, 0, -1, 1, -1, 1];
        assert_eq!(s, VertexWeighting::from_integers(expected, &a.graph).unwrap());
        assert_eq!(functional_d(&s, a.attachment.vertices()), rational(4));
    }

    #[test]
    fn special_vector_errors() {
        assert_eq!(special_vector(&p3_pair(vec![0, 2])), Err(KernelError::LevelZero));
        let odd = p3_pair(vec![0, 1, 2]).altan().unwrap();
        assert_eq!(special_vector(&odd), Err(KernelError::OddAttachment(3)));
    }

    #[test]
    fn functional_c_examples() {
        let g = path_graph(3);
        let q = p3_vector();
        let h3 = AttachmentSet::new(vec![0, 1, 2, 1], &g).unwrap();
        assert_eq!(functional_c(&q, &h3), rational(0));
        let h2 = AttachmentSet::new(vec![0, 2], &g).unwrap();
        assert_eq!(functional_c(&q, &h2), rational(-2));
        assert_eq!(functional_c(&VertexWeighting::zeros(3), &h2), rational(0));
    }

    #[test]
    fn extension_odd_h_forces_parameter() {
        let pair = p3_pair(vec![0, 0, 1, 2, 2]);
        let ext = extend_kernel_vector(&pair, &p3_vector(), None).unwrap();
        let altan = pair.altan().unwrap();
        assert!(is_kernel_vector(&altan.graph, &ext));
        // parent values preserved, x-block zero
        assert_eq!(&ext.values().entries()[..3], p3_vector().values().entries());
        assert!(altan.x_range.clone().all(|x| ext.get(x).is_zero()));
        let c = functional_c(&p3_vector(), &pair.attachment);
        assert_eq!(ext.get(altan.y(5)), &(c / rational(2)));
        assert_eq!(contract_kernel_vector(&altan, &ext).unwrap(), p3_vector());
    }

    #[test]
    fn extension_obstruction_for_h2() {
        let pair = p3_pair(vec![0, 2]);
        assert_eq!(
            extend_kernel_vector(&pair, &p3_vector(), None),
            Err(KernelError::NotExtendable { obstruction: rational(-2) })
        );
    }

    #[test]
    fn extension_of_zero_is_zero() {
        let pair = p3_pair(vec![0, 0, 2, 2]);
        let ext = extend_kernel_vector(&pair, &VertexWeighting::zeros(3), None).unwrap();
        assert!(ext.is_zero());
        let with_t = extend_kernel_vector(&pair, &VertexWeighting::zeros(3), Some(rational(1))).unwrap();
        // t on y_h gives the special vector up to sign
        let s = special_vector(&pair.altan().unwrap()).unwrap();
        assert_eq!(with_t, s);
    }

    #[test]
    fn extension_rejects_non_kernel_input() {
        let pair = p3_pair(vec![0, 2]);
        let ones = VertexWeighting::from_integers([1, 1, 1], &pair.graph).unwrap();
        assert_eq!(extend_kernel_vector(&pair, &ones, None), Err(KernelError::NotAKernelVector));
    }

    #[test]
    fn special_vector_contracts_to_zero() {
        let a = p3_pair(vec![0, 0, 2, 2]).altan().unwrap();
        let s = special_vector(&a).unwrap();
        assert!(contract_kernel_vector(&a, &s).unwrap().is_zero());
    }

    #[test]
    fn vector_with_x_entries_does_not_contract() {
        let a = p3_pair(vec![0, 0, 2, 2]).altan().unwrap();
        let basis = kernel_weightings(&a.graph);
        assert_eq!(basis.len(), 3);
        let non_contractible: Vec<_> = basis
            .iter()
            .filter(|q| a.x_range.clone().any(|x| !q.get(x).is_zero()))
            .collect();
        assert!(!non_contractible.is_empty());
        for q in non_contractible {
            assert!(matches!(
                contract_kernel_vector(&a, q),
                Err(KernelError::NotContractible { .. })
            ));
        }
    }

    #[test]
    fn p3_excess_reports() {
        let cases = [
            (vec![0, 0, 1, 2, 2], 1),
            (vec![0, 2], 1),
            (vec![0, 1, 2, 1], 2),
            (vec![0, 0, 2, 2], 3),
        ];
        for (h, altan_nullity) in cases {
            let r = excess_nullity(&p3_pair(h)).unwrap();
            assert_eq!(r.parent_nullity, 1);
            assert_eq!(r.altan_nullity, altan_nullity);
        }
        let r = excess_nullity(&p3_pair(vec![0, 0, 2, 2])).unwrap();
        assert_eq!((r.excess, r.h_parity), (2, Parity::Even));
        let r = excess_nullity(&p3_pair(vec![0, 0, 1, 2, 2])).unwrap();
        assert_eq!((r.excess, r.h_parity), (0, Parity::Odd));
    }

    #[test]
    fn iterated_stability_on_p3() {
        let pair = p3_pair(vec![0, 0, 2, 2]);
        assert!(verify_iterated_stability(&pair, 3).unwrap());
        assert_eq!(iterated_nullities(&pair, 3).unwrap(), vec![3, 3, 3]);
    }

    #[test]
    fn rebasing_makes_all_but_one_extendable() {
        // two disjoint P3 copies; H hits both so both kernel vectors obstruct
        let g = Graph::new(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        let h = AttachmentSet::new(vec![0, 3, 1, 4], &g).unwrap();
        let basis = kernel_weightings(&g);
        let rebased = rebase_basis(&basis, &h);
        assert_eq!(rebased.len(), 2);
        assert!(!functional_c(&rebased[0], &h).is_zero());
        assert!(functional_c(&rebased[1], &h).is_zero());
        assert!(is_kernel_vector(&g, &rebased[1]));
    }

    #[test]
    fn window_violation_is_reported() {
        let bad = ExcessReport {
            parent_nullity: 0,
            altan_nullity: 1,
            excess: 1,
            h_parity: Parity::Odd,
        };
        assert!(matches!(bad.check_window(), Err(KernelError::TheoremViolation(_))));
    }
}
