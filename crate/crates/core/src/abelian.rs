//! Finite abelian groups presented as direct sums of cyclic groups.
//!
//! A [`Group`] is an ordered list of cyclic factor orders `n_i ≥ 1` (trivial
//! factors are permitted and dropped during canonicalization). Elements are
//! residue vectors matching the factor list. Two presentations are considered
//! the same abstract group exactly when their canonical forms (prime-power
//! factors sorted by `(prime, exponent)`) agree; [`CanonicalMap`] and
//! [`Isomorphism`] make the rewriting between presentations explicit and
//! auditable instead of implicit.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default ceiling for exhaustive element enumeration (`2^20`).
///
/// Everything in scope is desk scale; the cap exists so a typo in a group
/// spec fails fast instead of allocating gigabytes.
pub const DEFAULT_ENUM_CAP: u64 = 1 << 20;

/// A finite abelian group `Z_{n_1} ⊕ … ⊕ Z_{n_r}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Group {
    factors: Vec<u64>,
}

/// An element of a [`Group`]: one residue per cyclic factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element {
    coords: Vec<u64>,
}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Element {
    /// Raw coordinate vector.
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub(crate) fn from_coords(coords: Vec<u64>) -> Self {
        Element { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl Group {
    /// Builds a group from cyclic factor orders. Factors of 1 are kept as
    /// written (they matter to some constructions); zero is rejected.
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::parse("zero modulus in group factors"));
        }
        Ok(Group { factors })
    }

    /// Parses the grammar `Z<n>("+"Z<n>)*`, case-insensitive, whitespace
    /// ignored: `"Z4+Z2"`, `"z12"`, `"Z2 + Z2 + Z3"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let compact: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse("empty group spec"));
        }
        let mut factors = Vec::new();
        for token in compact.split('+') {
            let rest = token
                .strip_prefix('Z')
                .or_else(|| token.strip_prefix('z'))
                .ok_or_else(|| Error::parse(format!("expected Z<n>, found {token:?}")))?;
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(format!("expected Z<n>, found {token:?}")));
            }
            let n: u64 = rest
                .parse()
                .map_err(|_| Error::parse(format!("modulus out of range in {token:?}")))?;
            if n == 0 {
                return Err(Error::parse("zero modulus in group spec"));
            }
            factors.push(n);
        }
        Group::new(factors)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Group order: the product of all factors.
    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    /// Least common multiple of the factor orders.
    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |acc, &n| lcm(acc, n))
    }

    pub fn zero(&self) -> Element {
        Element { coords: vec![0; self.factors.len()] }
    }

    /// Builds an element from signed coordinates, reducing each modulo its
    /// factor (so `-1` means `n_i - 1`).
    pub fn element(&self, coords: &[i64]) -> Element {
        assert_eq!(
            coords.len(),
            self.factors.len(),
            "element has {} coordinates, group {self} needs {}",
            coords.len(),
            self.factors.len()
        );
        Element {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u64)
                .collect(),
        }
    }

    /// Checks that `x` is a reduced residue vector for this group.
    pub fn contains(&self, x: &Element) -> bool {
        x.coords.len() == self.factors.len()
            && x.coords.iter().zip(&self.factors).all(|(&c, &n)| c < n)
    }

    fn check(&self, x: &Element) {
        assert!(
            self.contains(x),
            "element {x:?} does not belong to group {self}"
        );
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        self.check(x);
        self.check(y);
        Element {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .zip(&self.factors)
                .map(|((&a, &b), &n)| (a + b) % n)
                .collect(),
        }
    }

    pub fn neg(&self, x: &Element) -> Element {
        self.check(x);
        Element {
            coords: x
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &n)| (n - a) % n)
                .collect(),
        }
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    /// `k·x` for any signed `k` (negative `k` applies `neg`).
    pub fn scalar_mul(&self, k: i64, x: &Element) -> Element {
        self.check(x);
        Element {
            coords: x
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(&a, &n)| {
                    let m = (k.rem_euclid(n as i64)) as u128;
                    ((a as u128 * m) % n as u128) as u64
                })
                .collect(),
        }
    }

    /// Multiplicative order of `x` in the group.
    pub fn order_of(&self, x: &Element) -> u64 {
        self.check(x);
        x.coords
            .iter()
            .zip(&self.factors)
            .map(|(&a, &n)| if a == 0 { 1 } else { n / gcd(a, n) })
            .fold(1, lcm)
    }

    /// Sum of all group elements, computed per coordinate. An odd cyclic
    /// factor contributes 0; an even factor `Z_n` contributes `n/2` repeated
    /// `|G|/n` times.
    pub fn sum_of_all(&self) -> Element {
        let order = self.order();
        Element {
            coords: self
                .factors
                .iter()
                .map(|&n| {
                    if n % 2 == 1 {
                        0
                    } else {
                        // (|G|/n) copies of each residue; sum of Z_n is n/2.
                        let copies = order / n;
                        (n / 2 * (copies % 2)) % n
                    }
                })
                .collect(),
        }
    }

    /// Iterates every element exactly once in lexicographic coordinate order.
    pub fn elements(&self) -> Elements<'_> {
        Elements { group: self, next: Some(self.zero()) }
    }

    /// Collects all elements, refusing groups larger than `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Element>> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded { needed: order, cap });
        }
        Ok(self.elements().collect())
    }

    /// Canonical form: every factor a prime power > 1, sorted by
    /// `(prime, exponent)`, together with the coordinate bijection.
    pub fn canonicalize(&self) -> CanonicalMap {
        CanonicalMap::new(self)
    }

    /// Splits the canonical form into `(S_2, H)`: the Sylow 2-subgroup and
    /// the odd-order complement.
    pub fn sylow_two_split(&self) -> (Group, Group) {
        let canon = self.canonicalize();
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for &q in canon.target().factors() {
            if q % 2 == 0 {
                even.push(q);
            } else {
                odd.push(q);
            }
        }
        (Group { factors: even }, Group { factors: odd })
    }

    /// True iff the Sylow 2-subgroup is nontrivial and cyclic — the single
    /// structural obstruction in the existence theorem.
    pub fn has_cyclic_nontrivial_sylow_two(&self) -> bool {
        let (s2, _) = self.sylow_two_split();
        s2.factors.len() == 1
    }

    /// Direct sum `self ⊕ other`, concatenating factor lists.
    pub fn direct_sum(&self, other: &Group) -> Group {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Group { factors }
    }

    /// Isomorphism onto `other`, which must have the same canonical form.
    /// The map is the composite of both canonical bijections.
    pub fn iso_to(&self, other: &Group) -> Result<Isomorphism> {
        let fwd = self.canonicalize();
        let bwd = other.canonicalize();
        if fwd.target().factors() != bwd.target().factors() {
            return Err(Error::invalid(format!(
                "groups {self} and {other} are not isomorphic (canonical {} vs {})",
                fwd.target(),
                bwd.target()
            )));
        }
        Ok(Isomorphism { forward: fwd, backward: bwd })
    }
}

/// Lexicographic element iterator returned by [`Group::elements`].
pub struct Elements<'a> {
    group: &'a Group,
    next: Option<Element>,
}

impl Iterator for Elements<'_> {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        let current = self.next.take()?;
        let mut bump = current.clone();
        let mut i = bump.coords.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            bump.coords[i] += 1;
            if bump.coords[i] < self.group.factors[i] {
                self.next = Some(bump);
                break;
            }
            bump.coords[i] = 0;
        }
        Some(current)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

/// Prime factorization as `(prime, exponent, prime^exponent)` triples,
/// ascending by prime. `1` factorizes to an empty list.
fn prime_power_parts(n: u64) -> Vec<(u64, u32, u64)> {
    let mut parts = Vec::new();
    let mut rest = n;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                e += 1;
                q *= p;
            }
            parts.push((p, e, q));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        parts.push((rest, 1, rest));
    }
    parts
}

/// The bijection between a group and its canonical primary decomposition.
///
/// Built from CRT splits `Z_{mn} ≅ Z_m ⊕ Z_n` for coprime `m, n`; usable in
/// both directions. Trivial factors vanish in the canonical form (their
/// coordinate is always 0).
#[derive(Clone)]
pub struct CanonicalMap {
    source: Group,
    target: Group,
    /// For each source factor: the canonical coordinates it splits into,
    /// as `(target index, prime-power modulus)`.
    parts: Vec<Vec<(usize, u64)>>,
}

impl CanonicalMap {
    fn new(source: &Group) -> Self {
        // Gather prime-power components tagged with their source factor,
        // then sort by (prime, exponent); ties keep source order, which makes
        // the decomposition deterministic.
        let mut tagged: Vec<(u64, u32, u64, usize)> = Vec::new();
        for (i, &n) in source.factors.iter().enumerate() {
            for (p, e, q) in prime_power_parts(n) {
                tagged.push((p, e, q, i));
            }
        }
        tagged.sort_by_key(|&(p, e, _, i)| (p, e, i));

        let target = Group { factors: tagged.iter().map(|&(_, _, q, _)| q).collect() };
        let mut parts = vec![Vec::new(); source.factors.len()];
        for (j, &(_, _, q, i)) in tagged.iter().enumerate() {
            parts[i].push((j, q));
        }
        CanonicalMap { source: source.clone(), target, parts }
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    /// Maps a source element to canonical coordinates.
    pub fn forward(&self, x: &Element) -> Element {
        self.source.check(x);
        let mut coords = vec![0u64; self.target.factors.len()];
        for (i, &c) in x.coords.iter().enumerate() {
            for &(j, q) in &self.parts[i] {
                coords[j] = c % q;
            }
        }
        Element { coords }
    }

    /// Maps canonical coordinates back to the source presentation.
    pub fn backward(&self, y: &Element) -> Element {
        self.target.check(y);
        let coords = self
            .parts
            .iter()
            .zip(&self.source.factors)
            .map(|(parts, &n)| {
                if n == 1 {
                    return 0;
                }
                // CRT over this factor's pairwise-coprime prime powers.
                let mut modulus: i128 = 1;
                let mut residue: i128 = 0;
                for &(j, q) in parts {
                    residue = crt_combine(residue, modulus, y.coords[j] as i128, q as i128);
                    modulus *= q as i128;
                }
                debug_assert_eq!(modulus, n as i128);
                residue as u64
            })
            .collect();
        Element { coords }
    }
}

/// Solves `x ≡ r1 (mod m1)`, `x ≡ r2 (mod m2)` for coprime moduli.
fn crt_combine(r1: i128, m1: i128, r2: i128, m2: i128) -> i128 {
    let (g, s, _) = ext_gcd(m1, m2);
    debug_assert_eq!(g, 1, "CRT moduli must be coprime");
    let m = m1 * m2;
    let x = r1 + m1 * ((r2 - r1) * s % m2);
    x.rem_euclid(m)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// An explicit isomorphism between two presentations of one abstract group,
/// composed from their canonical maps.
#[derive(Clone)]
pub struct Isomorphism {
    forward: CanonicalMap,
    backward: CanonicalMap,
}

impl Isomorphism {
    pub fn from(&self) -> &Group {
        self.forward.source()
    }

    pub fn to(&self) -> &Group {
        self.backward.source()
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.backward.backward(&self.forward.forward(x))
    }
}

/// An injective homomorphism `source → target`, given by one image per
/// source factor generator.
#[derive(Clone, PartialEq, Eq)]
pub struct Embedding {
    source: Group,
    target: Group,
    images: Vec<Element>,
}

impl fmt::Debug for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Embedding({} -> {}, {:?})", self.source, self.target, self.images)
    }
}

impl Embedding {
    /// Checks arity and that each generator image has order dividing its
    /// source factor (so the map is a homomorphism). Injectivity is a
    /// separate, enumeration-backed check.
    pub fn new(source: Group, target: Group, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::Dimension { expected: source.rank(), got: images.len() });
        }
        for (img, &n) in images.iter().zip(source.factors()) {
            if !target.contains(img) {
                return Err(Error::invalid(format!(
                    "generator image {img:?} is not in target group {target}"
                )));
            }
            let ord = target.order_of(img);
            if n % ord != 0 {
                return Err(Error::invalid(format!(
                    "generator image {img:?} has order {ord}, which does not divide {n}"
                )));
            }
        }
        Ok(Embedding { source, target, images })
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Applies the homomorphism: `x ↦ Σ x_i · image_i`.
    pub fn apply(&self, x: &Element) -> Element {
        self.source.check(x);
        let mut acc = self.target.zero();
        for (&c, img) in x.coords().iter().zip(&self.images) {
            if c != 0 {
                acc = self.target.add(&acc, &self.target.scalar_mul(c as i64, img));
            }
        }
        acc
    }

    /// The full image as a set, enumerated (cap-guarded).
    pub fn image(&self, cap: u64) -> Result<HashSet<Element>> {
        let elems = self.source.enumerate(cap)?;
        Ok(elems.iter().map(|x| self.apply(x)).collect())
    }

    /// True iff the map is injective: the image has exactly source-order
    /// distinct elements.
    pub fn is_injective(&self, cap: u64) -> Result<bool> {
        Ok(self.image(cap)?.len() as u64 == self.source.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> Group {
        Group::parse(spec).unwrap()
    }

    #[test]
    fn parse_accepts_the_grammar() {
        assert_eq!(g("Z4+Z2").factors(), &[4, 2]);
        assert_eq!(g("Z12").factors(), &[12]);
        assert_eq!(g(" z2 + Z3 ").factors(), &[2, 3]);
        assert_eq!(g("Z1+Z5").factors(), &[1, 5]);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Group::parse("Z0").is_err());
        assert!(Group::parse("").is_err());
        assert!(Group::parse("Z4+").is_err());
        assert!(Group::parse("4+2").is_err());
        assert!(Group::parse("Zx").is_err());
    }

    #[test]
    fn arithmetic_in_z4_z2() {
        let grp = g("Z4+Z2");
        let x = grp.element(&[3, 1]);
        let y = grp.element(&[2, 1]);
        assert_eq!(grp.add(&x, &y), grp.element(&[1, 0]));
        assert_eq!(grp.neg(&grp.element(&[1, 1])), grp.element(&[3, 1]));
    }

    #[test]
    fn scalar_mul_wraps() {
        let grp = g("Z8");
        assert_eq!(grp.scalar_mul(4, &grp.element(&[2])), grp.element(&[0]));
        assert_eq!(grp.scalar_mul(-1, &grp.element(&[3])), grp.element(&[5]));
    }

    #[test]
    fn exponent_is_lcm() {
        assert_eq!(g("Z4+Z2").exponent(), 4);
        assert_eq!(g("Z2+Z2+Z2").exponent(), 2);
        assert_eq!(g("Z8+Z8").exponent(), 8);
    }

    #[test]
    fn canonical_form_of_z12() {
        let map = g("Z12").canonicalize();
        assert_eq!(map.target().factors(), &[4, 3]);
        let x = map.source().element(&[7]);
        assert_eq!(map.forward(&x), map.target().element(&[3, 1]));
        assert_eq!(map.backward(&map.target().element(&[3, 1])), x);
    }

    #[test]
    fn canonical_form_of_z6() {
        let map = g("Z6").canonicalize();
        assert_eq!(map.target().factors(), &[2, 3]);
        assert_eq!(map.forward(&map.source().element(&[5])), map.target().element(&[1, 2]));
    }

    #[test]
    fn canonical_form_fixes_already_canonical() {
        let map = g("Z4+Z2").canonicalize();
        // Sorted by (prime, exponent): Z2 before Z4.
        assert_eq!(map.target().factors(), &[2, 4]);
        let x = map.source().element(&[3, 1]);
        assert_eq!(map.backward(&map.forward(&x)), x);
    }

    #[test]
    fn canonical_roundtrip_up_to_512() {
        for order in 1..=512u64 {
            for factors in factorizations(order) {
                let grp = Group::new(factors).unwrap();
                if grp.order() > 600 {
                    continue;
                }
                let map = grp.canonicalize();
                assert_eq!(map.target().order(), grp.order());
                for x in grp.elements() {
                    let y = map.forward(&x);
                    assert_eq!(map.backward(&y), x, "roundtrip failed in {grp}");
                }
            }
        }
    }

    /// All ordered factor lists with product `n` drawn from a few shapes:
    /// the full cyclic group, its canonical form, and a reversed variant.
    /// (Exhausting every ordered factorization of every order ≤ 512 would be
    /// slow and adds nothing: the map is built per factor.)
    fn factorizations(n: u64) -> Vec<Vec<u64>> {
        let canon: Vec<u64> = prime_power_parts(n).iter().map(|&(_, _, q)| q).collect();
        let mut rev = canon.clone();
        rev.reverse();
        let mut out = vec![vec![n]];
        if canon.len() > 1 {
            out.push(canon);
            out.push(rev);
        }
        out
    }

    #[test]
    fn sylow_split_examples() {
        let (s2, h) = g("Z12+Z2").sylow_two_split();
        assert_eq!(s2.canonicalize().target().factors(), &[2, 4]);
        assert_eq!(h.factors(), &[3]);

        let (s2, h) = g("Z15").sylow_two_split();
        assert!(s2.factors().is_empty());
        assert_eq!(h.factors(), &[3, 5]);

        let (s2, h) = g("Z8+Z6").sylow_two_split();
        assert_eq!(s2.factors(), &[2, 8]);
        assert_eq!(h.factors(), &[3]);
    }

    #[test]
    fn cyclic_sylow_predicate() {
        assert!(g("Z12").has_cyclic_nontrivial_sylow_two());
        assert!(!g("Z2+Z2+Z3").has_cyclic_nontrivial_sylow_two());
        assert!(!g("Z9").has_cyclic_nontrivial_sylow_two());
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let grp = g("Z2+Z3");
        let all: Vec<Element> = grp.elements().collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], grp.element(&[0, 0]));
        assert_eq!(all[1], grp.element(&[0, 1]));
        assert_eq!(all[3], grp.element(&[1, 0]));
        let distinct: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(distinct.len(), 6);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let grp = g("Z64+Z64");
        assert!(matches!(grp.enumerate(1000), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn group_sums_match_enumeration() {
        for spec in ["Z6", "Z4+Z2", "Z8", "Z3+Z3", "Z2+Z2", "Z12+Z2"] {
            let grp = g(spec);
            let mut total = grp.zero();
            for x in grp.elements() {
                total = grp.add(&total, &x);
            }
            assert_eq!(total, grp.sum_of_all(), "sum of all elements in {grp}");
        }
    }

    #[test]
    fn exponent_kills_every_element() {
        for spec in ["Z4+Z2", "Z2+Z2+Z2", "Z8+Z8", "Z6+Z3"] {
            let grp = g(spec);
            let e = grp.exponent() as i64;
            for x in grp.elements() {
                assert!(grp.scalar_mul(e, &x).is_zero());
            }
        }
    }

    #[test]
    fn order_of_matches_definition() {
        let grp = g("Z12+Z2");
        for x in grp.elements() {
            let ord = grp.order_of(&x);
            assert!(grp.scalar_mul(ord as i64, &x).is_zero());
            for d in 1..ord {
                if ord % d == 0 {
                    assert!(!grp.scalar_mul(d as i64, &x).is_zero());
                }
            }
        }
    }

    #[test]
    fn embedding_multiples_of_four_in_z8() {
        let sub = g("Z2");
        let amb = g("Z8");
        let emb = Embedding::new(sub.clone(), amb.clone(), vec![amb.element(&[4])]).unwrap();
        let img = emb.image(DEFAULT_ENUM_CAP).unwrap();
        let expected: HashSet<Element> =
            [0i64, 4].iter().map(|&v| amb.element(&[v])).collect();
        assert_eq!(img, expected);
        assert!(emb.is_injective(DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn embedding_rejects_bad_order() {
        let sub = g("Z2");
        let amb = g("Z8");
        // 2 has order 4 in Z8, which does not divide 2.
        assert!(Embedding::new(sub, amb.clone(), vec![amb.element(&[2])]).is_err());
    }

    #[test]
    fn embedding_injectivity_detects_collapse() {
        let sub = g("Z2+Z2");
        let amb = g("Z2+Z2");
        let emb = Embedding::new(
            sub.clone(),
            amb.clone(),
            vec![amb.element(&[1, 0]), amb.element(&[1, 0])],
        )
        .unwrap();
        assert!(!emb.is_injective(DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn embedding_injectivity_at_scale() {
        // Z_64 ⊕ Z_64 embedded diagonally-ish in Z_128 ⊕ Z_64: source order 4096.
        let sub = g("Z64+Z64");
        let amb = g("Z128+Z64");
        let emb = Embedding::new(
            sub,
            amb.clone(),
            vec![amb.element(&[2, 0]), amb.element(&[0, 1])],
        )
        .unwrap();
        assert!(emb.is_injective(DEFAULT_ENUM_CAP).unwrap());
    }

    #[test]
    fn iso_between_presentations() {
        let a = g("Z3+Z2+Z2");
        let b = g("Z6+Z2");
        let iso = a.iso_to(&b).unwrap();
        let mut seen = HashSet::new();
        for x in a.elements() {
            let y = iso.apply(&x);
            assert!(b.contains(&y));
            assert!(seen.insert(y), "isomorphism must be injective");
        }
        // Homomorphism spot check.
        let x1 = a.element(&[1, 1, 0]);
        let x2 = a.element(&[2, 1, 1]);
        assert_eq!(
            iso.apply(&a.add(&x1, &x2)),
            b.add(&iso.apply(&x1), &iso.apply(&x2))
        );
    }

    #[test]
    fn iso_rejects_non_isomorphic() {
        assert!(g("Z4").iso_to(&g("Z2+Z2")).is_err());
    }

    #[test]
    fn add_commutes_and_associates_on_small_groups() {
        for spec in ["Z4+Z2", "Z6", "Z2+Z2+Z2"] {
            let grp = g(spec);
            let all: Vec<Element> = grp.elements().collect();
            for x in &all {
                for y in &all {
                    assert_eq!(grp.add(x, y), grp.add(y, x));
                    assert_eq!(grp.add(x, &grp.neg(x)), grp.zero());
                    for z in &all {
                        assert_eq!(
                            grp.add(&grp.add(x, y), z),
                            grp.add(x, &grp.add(y, z))
                        );
                    }
                }
            }
        }
    }
}
