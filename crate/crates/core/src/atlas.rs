//! Explicit base arrays and parametric array families.
//!
//! Each family below is a concrete, fully determined rectangle set: a fixed
//! header of displayed rows plus, for general odd `p`, a deterministic
//! filler scheme that extends every array to full `p×4` height. Headers are
//! stored as literal tables (first coordinates as `coef·p + offset`) so the
//! data can be diffed at a glance; nothing here is searched for.
//!
//! All constructors return zero-sum sets and are covered by verification
//! sweeps in the tests; the engine additionally re-verifies everything it
//! consumes from here.

use crate::abelian::{Element, Embedding, Group};
use crate::model::{HoleSpec, RectArray, RectSet};
use crate::{Error, Result};

/// First coordinate written as `coef·p + offset`, then the remaining
/// coordinates verbatim.
type Lin2 = (i64, i64, i64); // (coef, offset, second)
type Lin3 = (i64, i64, i64, i64); // (coef, offset, mid, last)

fn elem2(g: &Group, p: i64, (coef, off, j): Lin2) -> Element {
    g.element(&[coef * p + off, j])
}

fn elem3(g: &Group, p: i64, (coef, off, mid, last): Lin3) -> Element {
    g.element(&[coef * p + off, mid, last])
}

fn zero_sum_set(
    group: Group,
    a: usize,
    b: usize,
    hole: Option<HoleSpec>,
    rows_per_array: Vec<Vec<Vec<Element>>>,
) -> RectSet {
    let arrays: Vec<RectArray> = rows_per_array
        .into_iter()
        .map(|rows| RectArray::from_rows(rows).expect("literal arrays are rectangular"))
        .collect();
    RectSet {
        gamma: group.zero(),
        delta: group.zero(),
        group,
        a,
        b,
        c: arrays.len(),
        hole,
        arrays,
    }
}

fn assert_odd(p: u64) {
    assert!(p >= 3 && p % 2 == 1, "family parameter p = {p} must be odd and at least 3");
}

/// The `3×4` zero-sum base over `Z_3⊕Z_2⊕Z_2`.
pub fn base_3_2_2() -> RectSet {
    let g = Group::new(vec![3, 2, 2]).expect("fixed moduli");
    const ROWS: [[(i64, i64, i64); 4]; 3] = [
        [(1, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 1)],
        [(0, 1, 1), (2, 0, 0), (2, 0, 1), (2, 1, 0)],
        [(2, 1, 1), (1, 1, 0), (0, 0, 0), (0, 0, 1)],
    ];
    let rows = ROWS
        .iter()
        .map(|row| row.iter().map(|&(x, y, z)| g.element(&[x, y, z])).collect())
        .collect();
    zero_sum_set(g, 3, 4, None, vec![rows])
}

/// Filler block kinds: how many residues one block consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillerKind {
    Pairs,
    Quadruples,
    Octuples,
}

/// A deterministic partition of `Z_modulus ∖ index_set` into
/// negation-closed blocks, used to extend header arrays to full height.
#[derive(Clone, Debug)]
pub struct FillerScheme {
    pub kind: FillerKind,
    pub modulus: u64,
    pub index_set: Vec<u64>,
    pub blocks: Vec<Vec<u64>>,
}

impl FillerScheme {
    /// Residues `0, ±1, ±2, ±(p−2), ±(p−1), p` (10 values) used by the
    /// 5-row headers over `Z_{2p}`.
    fn header_residues_2p(p: i64) -> Vec<i64> {
        vec![0, 1, 2, p - 2, p - 1, p, p + 1, p + 2, 2 * p - 2, 2 * p - 1]
    }

    /// Pairs `{x, −x}` for `x = 3, …, p−3` over `Z_{2p}`.
    pub fn pairs_mod_2p(p: u64) -> FillerScheme {
        assert_odd(p);
        let m = 2 * p as i64;
        let blocks = (3..=p as i64 - 3).map(|x| vec![x as u64, (m - x) as u64]).collect();
        FillerScheme {
            kind: FillerKind::Pairs,
            modulus: 2 * p,
            index_set: Self::header_residues_2p(p as i64).iter().map(|&v| v as u64).collect(),
            blocks,
        }
    }

    /// Quadruples `{x, x+1, −x, −(x+1)}` for odd `x = 3, 5, …, p−4` over
    /// `Z_{2p}`.
    pub fn quadruples_mod_2p(p: u64) -> FillerScheme {
        assert_odd(p);
        let m = 2 * p as i64;
        let blocks = (3..=p as i64 - 4)
            .step_by(2)
            .map(|x| vec![x as u64, (x + 1) as u64, (m - x) as u64, (m - x - 1) as u64])
            .collect();
        FillerScheme {
            kind: FillerKind::Quadruples,
            modulus: 2 * p,
            index_set: Self::header_residues_2p(p as i64).iter().map(|&v| v as u64).collect(),
            blocks,
        }
    }

    /// Octuples `{a, b, c, d, −a, −b, −c, −d}` with `a = 3+2k`, `b = 4+2k`,
    /// `c = p+3+2k`, `d = p+4+2k` for `k = 0, …, (p−7)/2` over `Z_{4p}`.
    pub fn octuples_mod_4p(p: u64) -> FillerScheme {
        assert_odd(p);
        let pi = p as i64;
        let m = 4 * pi;
        let mut index_set: Vec<i64> = vec![0, 1, 2];
        for band in [pi, 2 * pi, 3 * pi] {
            index_set.extend([band - 2, band - 1, band, band + 1, band + 2]);
        }
        index_set.extend([4 * pi - 2, 4 * pi - 1]);
        let blocks = (0..=(pi - 7) / 2)
            .map(|k| {
                let (a, b, c, d) = (3 + 2 * k, 4 + 2 * k, pi + 3 + 2 * k, pi + 4 + 2 * k);
                [a, b, c, d, m - a, m - b, m - c, m - d].iter().map(|&v| v as u64).collect()
            })
            .collect();
        FillerScheme {
            kind: FillerKind::Octuples,
            modulus: 4 * p,
            index_set: index_set.iter().map(|&v| v as u64).collect(),
            blocks,
        }
    }

    /// Pairs `{x, −x}` for `x = 2, …, (p−1)/2` over `Z_p`.
    pub fn pairs_mod_p(p: u64) -> FillerScheme {
        assert_odd(p);
        let blocks = (2..=(p - 1) / 2).map(|x| vec![x, p - x]).collect();
        FillerScheme {
            kind: FillerKind::Pairs,
            modulus: p,
            index_set: vec![0, 1, p - 1],
            blocks,
        }
    }

    /// True iff the blocks partition `Z_modulus ∖ index_set` and every block
    /// is closed under negation.
    pub fn is_valid_partition(&self) -> bool {
        let mut seen = vec![false; self.modulus as usize];
        for &i in &self.index_set {
            if i >= self.modulus || seen[i as usize] {
                return false;
            }
            seen[i as usize] = true;
        }
        for block in &self.blocks {
            let expected = match self.kind {
                FillerKind::Pairs => 2,
                FillerKind::Quadruples => 4,
                FillerKind::Octuples => 8,
            };
            if block.len() != expected {
                return false;
            }
            for &v in block {
                if v >= self.modulus || seen[v as usize] {
                    return false;
                }
                seen[v as usize] = true;
            }
            for &v in block {
                if !block.contains(&((self.modulus - v) % self.modulus)) {
                    return false;
                }
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// Hole `⟨(1,0)⟩ + ⟨(0,4)⟩ = Z_m ⊕ {0,4}` inside `Z_m ⊕ Z_8`.
fn half_mod8_hole(g: &Group, m: u64) -> HoleSpec {
    let source = Group::new(vec![m, 2]).expect("fixed moduli");
    let emb = Embedding::new(
        source,
        g.clone(),
        vec![g.element(&[1, 0]), g.element(&[0, 4])],
    )
    .expect("images have the right orders");
    HoleSpec { subgroups: vec![emb] }
}

/// Two zero-sum `p×4` arrays over `Z_{2p}⊕Z_4` (one set of type
/// `(p,4;2)`), defined for odd `p ≥ 5`.
pub fn family_p_2_4(p: u64) -> Result<RectSet> {
    if p < 5 || p % 2 == 0 {
        return Err(Error::invalid(format!(
            "family over Z_2p+Z_4 needs odd p >= 5, got {p}"
        )));
    }
    const HEADERS: [[[Lin2; 4]; 5]; 2] = [
        [
            [(0, 1, 0), (0, 0, 3), (1, -1, 0), (1, 0, 1)],
            [(1, -1, 1), (1, 0, 3), (0, 1, 3), (0, 0, 1)],
            [(1, 0, 2), (1, 2, 3), (0, 0, 2), (2, -2, 1)],
            [(0, 2, 3), (2, -2, 3), (2, -1, 1), (0, 1, 1)],
            [(2, -2, 2), (0, 0, 0), (1, 1, 2), (1, 1, 0)],
        ],
        [
            [(0, 2, 0), (1, -2, 0), (2, -1, 3), (1, 1, 1)],
            [(1, -1, 2), (1, 2, 0), (1, -2, 3), (1, 1, 3)],
            [(0, 1, 2), (2, -1, 2), (1, 2, 2), (1, -2, 2)],
            [(1, 0, 0), (2, -1, 0), (1, -1, 3), (0, 2, 1)],
            [(2, -2, 0), (0, 2, 2), (1, 2, 1), (1, -2, 1)],
        ],
    ];
    let g = Group::new(vec![2 * p, 4])?;
    let pi = p as i64;
    let mut arrays: Vec<Vec<Vec<Element>>> = HEADERS
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|&t| elem2(&g, pi, t)).collect())
                .collect()
        })
        .collect();
    // One 2-row block per pair {x, −x}, ascending x, alternating arrays.
    for (idx, block) in FillerScheme::pairs_mod_2p(p).blocks.iter().enumerate() {
        let x = block[0] as i64;
        let target = &mut arrays[idx % 2];
        for row in [
            [(x, 0), (-x, 2), (x, 1), (-x, 1)],
            [(-x, 0), (x, 2), (-x, 3), (x, 3)],
        ] {
            target.push(row.iter().map(|&(v, j)| g.element(&[v, j])).collect());
        }
    }
    Ok(zero_sum_set(g, p as usize, 4, None, arrays))
}

/// Three zero-sum `p×4` arrays over `Z_{2p}⊕Z_8` covering everything
/// outside the subgroup `Z_{2p}⊕{0,4}` (incomplete set of type `(p,4;3)`),
/// defined for any odd `p ≥ 3`.
pub fn imrs_p_2_8(p: u64) -> RectSet {
    assert_odd(p);
    let g = Group::new(vec![2 * p, 8]).expect("fixed moduli");
    let hole = Some(half_mod8_hole(&g, 2 * p));
    if p == 3 {
        const ROWS: [[[(i64, i64); 4]; 3]; 3] = [
            [
                [(0, 1), (0, 3), (1, 1), (5, 3)],
                [(0, 2), (0, 6), (3, 1), (3, 7)],
                [(0, 5), (0, 7), (2, 6), (4, 6)],
            ],
            [
                [(1, 2), (3, 2), (5, 1), (3, 3)],
                [(1, 7), (2, 1), (5, 5), (4, 3)],
                [(4, 7), (1, 5), (2, 2), (5, 2)],
            ],
            [
                [(1, 3), (4, 1), (5, 7), (2, 5)],
                [(2, 7), (4, 5), (5, 6), (1, 6)],
                [(3, 6), (4, 2), (2, 3), (3, 5)],
            ],
        ];
        let arrays = ROWS
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|&(x, y)| g.element(&[x, y])).collect())
                    .collect()
            })
            .collect();
        return zero_sum_set(g, 3, 4, hole, arrays);
    }
    const HEADERS: [[[Lin2; 4]; 5]; 3] = [
        [
            [(1, 0, 2), (0, 0, 2), (0, 0, 7), (1, 0, 5)],
            [(1, 2, 3), (1, -2, 2), (1, 1, 1), (1, -1, 2)],
            [(0, 1, 1), (0, 1, 3), (1, -2, 5), (1, 0, 7)],
            [(2, -2, 3), (1, 1, 6), (0, 2, 2), (1, -1, 5)],
            [(2, -1, 7), (0, 0, 3), (2, -1, 1), (0, 2, 5)],
        ],
        [
            [(0, 0, 5), (1, 0, 3), (2, -2, 1), (1, 2, 7)],
            [(1, -1, 6), (0, 0, 6), (0, 1, 6), (1, 0, 6)],
            [(0, 2, 7), (1, 0, 1), (0, 0, 1), (1, -2, 7)],
            [(1, 1, 7), (1, -1, 1), (0, 2, 6), (2, -2, 2)],
            [(2, -2, 7), (1, 1, 5), (2, -1, 2), (1, 2, 2)],
        ],
        [
            [(1, 1, 3), (2, -1, 3), (0, 2, 1), (1, -2, 1)],
            [(0, 2, 3), (1, -2, 3), (2, -2, 5), (1, 2, 5)],
            [(1, -1, 7), (1, 2, 1), (0, 1, 2), (2, -2, 6)],
            [(2, -1, 5), (1, 2, 6), (1, -2, 6), (0, 1, 7)],
            [(2, -1, 6), (1, -1, 3), (1, 1, 2), (0, 1, 5)],
        ],
    ];
    let pi = p as i64;
    let mut arrays: Vec<Vec<Vec<Element>>> = HEADERS
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|&t| elem2(&g, pi, t)).collect())
                .collect()
        })
        .collect();
    // Per quadruple {x, y, −x, −y}: one 2-row block in each of the three
    // arrays, with second coordinates (1,7), (2,6), (3,5) respectively.
    for block in &FillerScheme::quadruples_mod_2p(p).blocks {
        let (x, y) = (block[0] as i64, block[1] as i64);
        for (t, (s1, s2)) in [(1, 7), (2, 6), (3, 5)].into_iter().enumerate() {
            for row in [
                [(x, s1), (-x, s1), (y, s2), (-y, s2)],
                [(-x, s2), (x, s2), (-y, s1), (y, s1)],
            ] {
                arrays[t].push(row.iter().map(|&(v, j)| g.element(&[v, j])).collect());
            }
        }
    }
    zero_sum_set(g, p as usize, 4, hole, arrays)
}

/// Six zero-sum `p×4` arrays over `Z_{4p}⊕Z_8` covering everything outside
/// the subgroup `Z_{4p}⊕{0,4}` (incomplete set of type `(p,4;6)`), defined
/// for any odd `p ≥ 3`.
pub fn imrs_p_4_8(p: u64) -> RectSet {
    assert_odd(p);
    let g = Group::new(vec![4 * p, 8]).expect("fixed moduli");
    let hole = Some(half_mod8_hole(&g, 4 * p));
    if p == 3 {
        const ROWS: [[[(i64, i64); 4]; 3]; 6] = [
            [
                [(2, 2), (9, 6), (7, 2), (6, 6)],
                [(3, 5), (11, 1), (1, 3), (9, 7)],
                [(7, 1), (4, 1), (4, 3), (9, 3)],
            ],
            [
                [(0, 5), (1, 5), (7, 7), (4, 7)],
                [(1, 6), (2, 1), (6, 3), (3, 6)],
                [(11, 5), (9, 2), (11, 6), (5, 3)],
            ],
            [
                [(9, 1), (7, 3), (10, 1), (10, 3)],
                [(8, 1), (5, 7), (9, 5), (2, 3)],
                [(7, 6), (0, 6), (5, 2), (0, 2)],
            ],
            [
                [(5, 5), (11, 3), (2, 7), (6, 1)],
                [(5, 6), (10, 2), (10, 6), (11, 2)],
                [(2, 5), (3, 3), (0, 3), (7, 5)],
            ],
            [
                [(1, 1), (2, 6), (3, 2), (6, 7)],
                [(1, 2), (6, 5), (11, 7), (6, 2)],
                [(10, 5), (4, 5), (10, 7), (0, 7)],
            ],
            [
                [(8, 6), (4, 2), (4, 6), (8, 2)],
                [(8, 3), (8, 5), (5, 1), (3, 7)],
                [(8, 7), (0, 1), (3, 1), (1, 7)],
            ],
        ];
        let arrays = ROWS
            .iter()
            .map(|rows| {
                rows.iter()
                    .map(|row| row.iter().map(|&(x, y)| g.element(&[x, y])).collect())
                    .collect()
            })
            .collect();
        return zero_sum_set(g, 3, 4, hole, arrays);
    }
    const HEADERS: [[[Lin2; 4]; 5]; 6] = [
        [
            [(2, -1, 1), (3, -2, 3), (3, 1, 2), (0, 2, 2)],
            [(2, -2, 5), (1, -1, 7), (3, 2, 5), (2, 1, 7)],
            [(0, 0, 5), (2, 1, 6), (2, -1, 2), (0, 0, 3)],
            [(1, 1, 6), (0, 2, 3), (1, -2, 2), (2, -1, 5)],
            [(3, 2, 7), (2, 0, 5), (3, 0, 5), (4, -2, 7)],
        ],
        [
            [(4, -2, 2), (1, 2, 2), (1, 2, 5), (2, -2, 7)],
            [(0, 2, 6), (3, -2, 2), (1, 1, 7), (4, -1, 1)],
            [(2, 0, 7), (1, -2, 3), (1, 0, 1), (0, 2, 5)],
            [(2, 0, 2), (3, 1, 6), (3, -1, 2), (0, 0, 6)],
            [(0, 0, 7), (0, 1, 3), (2, -2, 1), (2, 1, 5)],
        ],
        [
            [(4, -2, 5), (1, 2, 1), (2, -2, 3), (1, 2, 7)],
            [(4, -2, 6), (0, 2, 7), (1, -1, 2), (3, 1, 1)],
            [(0, 1, 7), (1, -1, 6), (2, 0, 6), (1, 0, 5)],
            [(1, 1, 5), (1, -1, 3), (2, 1, 2), (4, -1, 6)],
            [(3, 2, 1), (1, -2, 7), (1, 2, 3), (3, -2, 5)],
        ],
        [
            [(2, 2, 2), (3, -2, 6), (3, 0, 6), (0, 0, 2)],
            [(3, 2, 6), (1, -1, 1), (3, -1, 7), (1, 0, 2)],
            [(2, 0, 1), (3, -1, 3), (0, 1, 1), (3, 0, 3)],
            [(3, -2, 1), (2, 2, 3), (3, 1, 5), (4, -1, 7)],
            [(2, -2, 6), (3, 2, 3), (3, -1, 5), (0, 1, 2)],
        ],
        [
            [(0, 0, 1), (4, -2, 3), (2, 2, 1), (2, 0, 3)],
            [(1, 2, 6), (1, -2, 5), (3, -1, 6), (3, 1, 7)],
            [(1, -2, 1), (1, 1, 3), (1, 1, 1), (1, 0, 3)],
            [(0, 1, 5), (0, 1, 6), (3, -2, 7), (1, 0, 6)],
            [(2, -1, 3), (2, 2, 7), (3, 0, 1), (1, -1, 5)],
        ],
        [
            [(1, -2, 6), (2, 2, 6), (4, -1, 2), (1, 1, 2)],
            [(2, 2, 5), (2, -1, 6), (2, -2, 2), (2, 1, 3)],
            [(4, -1, 5), (3, 0, 2), (3, 2, 2), (2, -1, 7)],
            [(2, 1, 1), (4, -1, 3), (3, -1, 1), (3, 1, 3)],
            [(3, 0, 7), (1, 0, 7), (0, 2, 1), (4, -2, 1)],
        ],
    ];
    let pi = p as i64;
    let mut arrays: Vec<Vec<Vec<Element>>> = HEADERS
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|&t| elem2(&g, pi, t)).collect())
                .collect()
        })
        .collect();
    // Per octuple {a,b,c,d,−a,−b,−c,−d}: arrays 0..2 get blocks built from
    // (a,b), arrays 3..5 from (c,d), each with second coordinates (1,7),
    // (2,6), (3,5) in turn.
    for block in &FillerScheme::octuples_mod_4p(p).blocks {
        for (half, &(u, v)) in [(0, 1), (2, 3)].iter().enumerate() {
            let (x, y) = (block[u] as i64, block[v] as i64);
            for (t, (s1, s2)) in [(1, 7), (2, 6), (3, 5)].into_iter().enumerate() {
                for row in [
                    [(x, s1), (-x, s1), (y, s2), (-y, s2)],
                    [(-x, s2), (x, s2), (-y, s1), (y, s1)],
                ] {
                    arrays[3 * half + t]
                        .push(row.iter().map(|&(w, j)| g.element(&[w, j])).collect());
                }
            }
        }
    }
    zero_sum_set(g, p as usize, 4, hole, arrays)
}

/// Nine zero-sum `p×4` arrays over `Z_p⊕Z_8⊕Z_8` covering everything
/// outside the union of the two index-2-in-one-coordinate subgroups
/// `Z_p⊕{0,4}⊕Z_8` and `Z_p⊕Z_8⊕{0,4}` (incomplete set of type `(p,4;9)`),
/// defined for any odd `p ≥ 3`.
pub fn imrs_p_8_8_complement(p: u64) -> RectSet {
    assert_odd(p);
    let g = Group::new(vec![p, 8, 8]).expect("fixed moduli");
    // Both hole subgroups are presented over Z_2p⊕Z_8 so that sets built
    // over that group can be mapped in without re-presentation.
    let part_group = Group::new(vec![2 * p, 8]).expect("fixed moduli");
    let emb_mid = Embedding::new(
        part_group.clone(),
        g.clone(),
        vec![g.element(&[1, 4, 0]), g.element(&[0, 0, 1])],
    )
    .expect("images have the right orders");
    let emb_last = Embedding::new(
        part_group,
        g.clone(),
        vec![g.element(&[1, 0, 4]), g.element(&[0, 1, 0])],
    )
    .expect("images have the right orders");
    let hole = Some(HoleSpec { subgroups: vec![emb_mid, emb_last] });

    const HEADERS: [[[Lin3; 4]; 3]; 9] = [
        [
            [(0, 0, 3, 3), (0, 0, 3, 5), (0, 0, 5, 3), (0, 0, 5, 5)],
            [(0, 1, 6, 6), (0, 1, 6, 2), (1, -1, 2, 6), (1, -1, 2, 2)],
            [(1, -1, 7, 7), (1, -1, 7, 1), (0, 1, 1, 7), (0, 1, 1, 1)],
        ],
        [
            [(0, 0, 3, 2), (0, 0, 3, 6), (0, 0, 5, 2), (0, 0, 5, 6)],
            [(0, 1, 6, 1), (0, 1, 6, 7), (1, -1, 2, 1), (1, -1, 2, 7)],
            [(1, -1, 7, 5), (1, -1, 7, 3), (0, 1, 1, 5), (0, 1, 1, 3)],
        ],
        [
            [(0, 0, 3, 1), (0, 0, 3, 7), (0, 0, 5, 1), (0, 0, 5, 7)],
            [(0, 1, 6, 5), (0, 1, 6, 3), (1, -1, 2, 5), (1, -1, 2, 3)],
            [(1, -1, 7, 2), (1, -1, 7, 6), (0, 1, 1, 2), (0, 1, 1, 6)],
        ],
        [
            [(0, 0, 2, 3), (0, 0, 2, 5), (0, 0, 6, 3), (0, 0, 6, 5)],
            [(1, -1, 1, 6), (1, -1, 1, 2), (0, 1, 7, 6), (0, 1, 7, 2)],
            [(0, 1, 5, 7), (0, 1, 5, 1), (1, -1, 3, 7), (1, -1, 3, 1)],
        ],
        [
            [(0, 0, 2, 2), (0, 0, 2, 6), (0, 0, 6, 2), (0, 0, 6, 6)],
            [(1, -1, 1, 1), (1, -1, 1, 7), (0, 1, 7, 1), (0, 1, 7, 7)],
            [(0, 1, 5, 5), (0, 1, 5, 3), (1, -1, 3, 5), (1, -1, 3, 3)],
        ],
        [
            [(0, 0, 2, 1), (0, 0, 2, 7), (0, 0, 6, 1), (0, 0, 6, 7)],
            [(1, -1, 1, 5), (1, -1, 1, 3), (0, 1, 7, 5), (0, 1, 7, 3)],
            [(0, 1, 5, 2), (0, 1, 5, 6), (1, -1, 3, 2), (1, -1, 3, 6)],
        ],
        [
            [(0, 0, 1, 3), (0, 0, 1, 5), (0, 0, 7, 3), (0, 0, 7, 5)],
            [(1, -1, 5, 6), (1, -1, 5, 2), (0, 1, 3, 6), (0, 1, 3, 2)],
            [(0, 1, 2, 7), (0, 1, 2, 1), (1, -1, 6, 7), (1, -1, 6, 1)],
        ],
        [
            [(0, 0, 1, 2), (0, 0, 1, 6), (0, 0, 7, 2), (0, 0, 7, 6)],
            [(1, -1, 5, 1), (1, -1, 5, 7), (0, 1, 3, 1), (0, 1, 3, 7)],
            [(0, 1, 2, 5), (0, 1, 2, 3), (1, -1, 6, 5), (1, -1, 6, 3)],
        ],
        [
            [(0, 0, 1, 1), (0, 0, 1, 7), (0, 0, 7, 1), (0, 0, 7, 7)],
            [(1, -1, 5, 5), (1, -1, 5, 3), (0, 1, 3, 5), (0, 1, 3, 3)],
            [(0, 1, 2, 2), (0, 1, 2, 6), (1, -1, 6, 2), (1, -1, 6, 6)],
        ],
    ];
    let pi = p as i64;
    let mut arrays: Vec<Vec<Vec<Element>>> = HEADERS
        .iter()
        .map(|rows| {
            rows.iter()
                .map(|row| row.iter().map(|&t| elem3(&g, pi, t)).collect())
                .collect()
        })
        .collect();
    // Per pair {x, −x}: each of the nine arrays gets one 2-row block; the
    // block for array 3r+s uses middle pair (1,7)/(2,6)/(3,5) indexed by r
    // and last pair indexed by s.
    const COORD_PAIRS: [(i64, i64); 3] = [(1, 7), (2, 6), (3, 5)];
    for block in &FillerScheme::pairs_mod_p(p).blocks {
        let x = block[0] as i64;
        for (r, &(m1, m2)) in COORD_PAIRS.iter().enumerate() {
            for (s, &(l1, l2)) in COORD_PAIRS.iter().enumerate() {
                for row in [
                    [(x, m1, l1), (x, m2, l2), (-x, m1, l2), (-x, m2, l1)],
                    [(-x, m2, l2), (-x, m1, l1), (x, m2, l1), (x, m1, l2)],
                ] {
                    arrays[3 * r + s]
                        .push(row.iter().map(|&(w, m, l)| g.element(&[w, m, l])).collect());
                }
            }
        }
    }
    zero_sum_set(g, p as usize, 4, hole, arrays)
}

/// The `p×6` signed column pattern used by the column-expansion
/// construction: a fixed 3-row block atop `(p−3)/2` copies of a 2-row
/// block. Every row is a permutation of `{±1,±2,±3}`, every column sums to
/// 0, and adjacent columns `(1,2)`, `(3,4)`, `(5,6)` cancel in every row.
#[derive(Clone, Debug)]
pub struct CpPattern {
    pub p: u64,
    pub grid: Vec<[i64; 6]>,
}

pub fn c_pattern(p: u64) -> CpPattern {
    assert_odd(p);
    const C3: [[i64; 6]; 3] = [
        [3, -3, 2, -2, 1, -1],
        [-2, 2, 1, -1, -3, 3],
        [-1, 1, -3, 3, 2, -2],
    ];
    const C2: [[i64; 6]; 2] = [
        [3, -3, 2, -2, 1, -1],
        [-3, 3, -2, 2, -1, 1],
    ];
    let mut grid: Vec<[i64; 6]> = C3.to_vec();
    for _ in 0..(p - 3) / 2 {
        grid.extend_from_slice(&C2);
    }
    CpPattern { p, grid }
}
