//! Composable constructions on rectangle sets: re-presentation along an
//! isomorphism, hole filling, doubling the trailing 2-power factors,
//! column sextupling against the `C` pattern, and lifts along odd factors
//! driven by shift plans.
//!
//! Every function re-verifies its output before returning it; a gate
//! failure is reported as [`Error::VerifyGate`] and means a bug in this
//! module, not bad input.

use serde::{Deserialize, Serialize};

use crate::abelian::{Element, Embedding, Group};
use crate::atlas::c_pattern;
use crate::cache::Cache;
use crate::model::{HoleSpec, RectArray, RectSet};
use crate::{Error, Result};

/// Node budget for the shift-plan search fallback (closed forms cover all
/// shapes this crate uses, so the fallback only runs for odd×odd shapes).
const PLAN_SEARCH_MAX_NODES: u64 = 10_000_000;

fn gated(set: RectSet, op: &str) -> Result<RectSet> {
    let report = if set.gamma.is_zero() && set.delta.is_zero() {
        set.verify_star()
    } else {
        set.verify()
    };
    if report.ok {
        Ok(set)
    } else {
        Err(Error::VerifyGate(format!("{op}: {}", report.failures[0])))
    }
}

fn map_array(arr: &RectArray, f: &dyn Fn(&Element) -> Element) -> RectArray {
    RectArray {
        rows: arr.rows,
        cols: arr.cols,
        entries: arr.entries.iter().map(f).collect(),
    }
}

/// Rewrites a set over an isomorphic presentation of its group, mapping
/// entries, sums, and hole embeddings.
pub fn transport(source: &RectSet, target: &Group) -> Result<RectSet> {
    let iso = source.group.iso_to(target)?;
    let arrays = source.arrays.iter().map(|arr| map_array(arr, &|e| iso.apply(e))).collect();
    let hole = source
        .hole
        .as_ref()
        .map(|h| -> Result<HoleSpec> {
            let subgroups = h
                .subgroups
                .iter()
                .map(|emb| {
                    Embedding::new(
                        emb.source().clone(),
                        target.clone(),
                        emb.images().iter().map(|e| iso.apply(e)).collect(),
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(HoleSpec { subgroups })
        })
        .transpose()?;
    gated(
        RectSet {
            group: target.clone(),
            a: source.a,
            b: source.b,
            c: source.c,
            gamma: iso.apply(&source.gamma),
            delta: iso.apply(&source.delta),
            hole,
            arrays,
        },
        "transport",
    )
}

/// Completes an incomplete set whose hole is a single subgroup by mapping a
/// complete set over the hole's source presentation through the embedding.
pub fn fill_hole(incomplete: &RectSet, filler: &RectSet) -> Result<RectSet> {
    let hole = incomplete
        .hole
        .as_ref()
        .ok_or_else(|| Error::invalid("fill_hole needs a set with a hole"))?;
    let [emb] = hole.subgroups.as_slice() else {
        return Err(Error::invalid("fill_hole needs exactly one hole subgroup"));
    };
    check_part(emb, filler, incomplete, false)?;
    let mut arrays = incomplete.arrays.clone();
    arrays.extend(filler.arrays.iter().map(|arr| map_array(arr, &|e| emb.apply(e))));
    gated(
        RectSet {
            group: incomplete.group.clone(),
            a: incomplete.a,
            b: incomplete.b,
            c: incomplete.c + filler.c,
            gamma: incomplete.gamma.clone(),
            delta: incomplete.delta.clone(),
            hole: None,
            arrays,
        },
        "fill_hole",
    )
}

/// Completes a set whose hole is a union of two subgroups. `part1` covers
/// the first subgroup except for its own hole, which must land inside the
/// second subgroup; `part2` covers the second completely. Coverage of the
/// interlock is settled by the final verification.
pub fn fill_two_holes(main: &RectSet, part1: &RectSet, part2: &RectSet) -> Result<RectSet> {
    let hole = main
        .hole
        .as_ref()
        .ok_or_else(|| Error::invalid("fill_two_holes needs a set with a hole"))?;
    let [emb1, emb2] = hole.subgroups.as_slice() else {
        return Err(Error::invalid("fill_two_holes needs exactly two hole subgroups"));
    };
    check_part(emb1, part1, main, true)?;
    check_part(emb2, part2, main, false)?;
    let mut arrays = main.arrays.clone();
    arrays.extend(part1.arrays.iter().map(|arr| map_array(arr, &|e| emb1.apply(e))));
    arrays.extend(part2.arrays.iter().map(|arr| map_array(arr, &|e| emb2.apply(e))));
    gated(
        RectSet {
            group: main.group.clone(),
            a: main.a,
            b: main.b,
            c: main.c + part1.c + part2.c,
            gamma: main.gamma.clone(),
            delta: main.delta.clone(),
            hole: None,
            arrays,
        },
        "fill_two_holes",
    )
}

fn check_part(
    emb: &Embedding,
    part: &RectSet,
    whole: &RectSet,
    hole_allowed: bool,
) -> Result<()> {
    if emb.target() != &whole.group {
        return Err(Error::invalid("hole embedding does not target the ambient group"));
    }
    if emb.source() != &part.group {
        return Err(Error::invalid(format!(
            "part is presented over {} but the hole subgroup over {}",
            part.group,
            emb.source()
        )));
    }
    if part.hole.is_some() && !hole_allowed {
        return Err(Error::invalid("this part must be a complete set"));
    }
    if (part.a, part.b) != (whole.a, whole.b) {
        return Err(Error::Dimension { expected: whole.a * whole.b, got: part.a * part.b });
    }
    if emb.apply(&part.gamma) != whole.gamma || emb.apply(&part.delta) != whole.delta {
        return Err(Error::invalid("part sums do not map onto the ambient sums"));
    }
    Ok(())
}

/// Doubles the last two factors of the group, which must currently be
/// trivial or `Z_2`, producing four arrays per source array.
///
/// Each source entry `(w, u, v)` maps to `(w, 2u, 2v) + z` where `z` ranges
/// over `{0, e_x, e_y, −e_x−e_y}` (units of the two doubled factors):
/// within each row the four output arrays use the four offsets once each,
/// rotated by row so that offset counts per column are multiples of 4.
/// The rotation scheme differs by `a mod 4` to make those counts come out
/// right.
pub fn double_last_two(source: &RectSet) -> Result<RectSet> {
    let g1 = &source.group;
    let k = g1.rank();
    if k < 3 {
        return Err(Error::invalid("doubling needs at least three group factors"));
    }
    let (m, n) = (g1.factors()[k - 2], g1.factors()[k - 1]);
    if !matches!(m, 1 | 2) || !matches!(n, 1 | 2) {
        return Err(Error::invalid(format!(
            "doubling applies to trailing factors 1 or 2, got {m} and {n}"
        )));
    }
    require_star_shape(source, "double_last_two")?;
    let a = source.a;

    let mut factors = g1.factors().to_vec();
    factors[k - 2] *= 2;
    factors[k - 1] *= 2;
    let g2 = Group::new(factors)?;

    let unit = |idx: usize| {
        let mut coords = vec![0i64; k];
        coords[idx] = 1;
        g2.element(&coords)
    };
    let z0 = g2.zero();
    let zx = unit(k - 2);
    let zy = unit(k - 1);
    let zm = g2.neg(&g2.add(&zx, &zy));

    // offsets[l][row_class] for output slots l = 0..4; row classes are the
    // first three rows and then everything else.
    let offsets: [[&Element; 4]; 4] = if a % 4 == 3 {
        [
            [&z0, &z0, &z0, &z0],
            [&zy, &zx, &zm, &zy],
            [&zx, &zm, &zy, &zx],
            [&zm, &zy, &zx, &zm],
        ]
    } else {
        [
            [&zx, &zy, &zm, &z0],
            [&z0, &zx, &zx, &zx],
            [&zy, &z0, &zy, &zy],
            [&zm, &zm, &z0, &zm],
        ]
    };

    let doubled = |e: &Element| -> Element {
        let mut coords: Vec<i64> = e.coords().iter().map(|&x| x as i64).collect();
        coords[k - 2] *= 2;
        coords[k - 1] *= 2;
        g2.element(&coords)
    };
    let arrays: Vec<RectArray> = source
        .arrays
        .iter()
        .flat_map(|arr| {
            offsets.iter().map(|slot| {
                let entries = (0..arr.rows)
                    .flat_map(|i| {
                        let z = slot[i.min(3)];
                        (0..arr.cols).map(move |j| (i, j, z))
                    })
                    .map(|(i, j, z)| g2.add(&doubled(arr.entry(i, j)), z))
                    .collect();
                RectArray { rows: arr.rows, cols: arr.cols, entries }
            })
        })
        .collect();
    gated(
        RectSet {
            gamma: g2.zero(),
            delta: g2.zero(),
            group: g2,
            a: source.a,
            b: 4,
            c: source.c * 4,
            hole: None,
            arrays,
        },
        "double_last_two",
    )
}

/// Multiplies the trailing 2-power factor by 8 (`alpha` is its current
/// exponent; `alpha = 0` means there is none and `Z_8` is appended),
/// producing six arrays per source array. The output is incomplete: its
/// hole is the index-4 subgroup of the grown factor, to be filled
/// separately.
///
/// Entries `(w, v)` at row `i` map to `(w, 8v + C[i][σ_l(j)])` where `C` is
/// the `a × 6` pattern from [`c_pattern`] and the six output slots `l` read
/// its column pairs `(0,1)`, `(2,3)`, `(4,5)` in the orders `abab`/`baba`.
pub fn expand_cp(source: &RectSet, alpha: u32) -> Result<RectSet> {
    require_star_shape(source, "expand_cp")?;
    let g1 = &source.group;
    let k = g1.rank();
    let w_len = if alpha == 0 {
        k
    } else {
        if g1.factors()[k - 1] != 1 << alpha {
            return Err(Error::invalid(format!(
                "expand_cp expected trailing factor {} on {g1}",
                1u64 << alpha
            )));
        }
        k - 1
    };
    let pattern = c_pattern(source.a as u64);
    let mut factors = g1.factors()[..w_len].to_vec();
    factors.push(1 << (alpha + 3));
    let g2 = Group::new(factors)?;

    const SLOT_COLS: [[usize; 4]; 6] = [
        [0, 1, 0, 1],
        [1, 0, 1, 0],
        [2, 3, 2, 3],
        [3, 2, 3, 2],
        [4, 5, 4, 5],
        [5, 4, 5, 4],
    ];
    let arrays: Vec<RectArray> = source
        .arrays
        .iter()
        .flat_map(|arr| {
            SLOT_COLS.iter().map(|cols| {
                let entries = (0..arr.rows)
                    .flat_map(|i| (0..4).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let e = arr.entry(i, j);
                        let mut coords: Vec<i64> =
                            e.coords()[..w_len].iter().map(|&x| x as i64).collect();
                        let v = if alpha == 0 { 0 } else { e.coords()[k - 1] as i64 };
                        coords.push(8 * v + pattern.grid[i][cols[j]]);
                        g2.element(&coords)
                    })
                    .collect();
                RectArray { rows: arr.rows, cols: 4, entries }
            })
        })
        .collect();

    // The hole: everything whose grown coordinate is a multiple of 4.
    let mut hole_factors = g1.factors()[..w_len].to_vec();
    hole_factors.push(1 << (alpha + 1));
    let hole_source = Group::new(hole_factors)?;
    let mut images: Vec<Element> = (0..w_len)
        .map(|i| {
            let mut coords = vec![0i64; w_len + 1];
            coords[i] = 1;
            g2.element(&coords)
        })
        .collect();
    let mut last = vec![0i64; w_len + 1];
    last[w_len] = 4;
    images.push(g2.element(&last));
    let emb = Embedding::new(hole_source, g2.clone(), images)?;

    gated(
        RectSet {
            gamma: g2.zero(),
            delta: g2.zero(),
            group: g2,
            a: source.a,
            b: 4,
            c: source.c * 6,
            hole: Some(HoleSpec { subgroups: vec![emb] }),
            arrays,
        },
        "expand_cp",
    )
}

fn require_star_shape(source: &RectSet, op: &str) -> Result<()> {
    if source.b != 4 {
        return Err(Error::invalid(format!("{op} needs four columns, got {}", source.b)));
    }
    if source.a < 3 || source.a % 2 == 0 {
        return Err(Error::invalid(format!("{op} needs an odd row count >= 3, got {}", source.a)));
    }
    if !source.gamma.is_zero() || !source.delta.is_zero() {
        return Err(Error::invalid(format!("{op} needs zero row and column sums")));
    }
    if source.hole.is_some() {
        return Err(Error::invalid(format!("{op} needs a complete set")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Shift plans and the two lifts
// ---------------------------------------------------------------------------

/// `t` integer arrays of shape `a×b` with values in `{−s..s}`,
/// `s = (t−1)/2`: at every position the values across the plan hit each of
/// the `t` centered residues exactly once, and every row and column of
/// every array sums to zero. Powers both lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftPlan {
    pub t: u64,
    pub a: usize,
    pub b: usize,
    /// Indexed `[k][i][j]`.
    pub arrays: Vec<Vec<Vec<i64>>>,
}

impl ShiftPlan {
    pub fn is_valid(&self) -> bool {
        if self.t == 0 || self.t % 2 == 0 || self.arrays.len() != self.t as usize {
            return false;
        }
        let s = ((self.t - 1) / 2) as i64;
        let shaped = self
            .arrays
            .iter()
            .all(|arr| arr.len() == self.a && arr.iter().all(|row| row.len() == self.b));
        if !shaped || self.a == 0 || self.b == 0 {
            return false;
        }
        for arr in &self.arrays {
            for row in arr {
                if row.iter().any(|&v| v < -s || v > s) || row.iter().sum::<i64>() != 0 {
                    return false;
                }
            }
            for j in 0..self.b {
                if arr.iter().map(|row| row[j]).sum::<i64>() != 0 {
                    return false;
                }
            }
        }
        for i in 0..self.a {
            for j in 0..self.b {
                let mut fiber: Vec<i64> =
                    self.arrays.iter().map(|arr| arr[i][j]).collect();
                fiber.sort_unstable();
                if fiber != (-s..=s).collect::<Vec<_>>() {
                    return false;
                }
            }
        }
        true
    }
}

/// Returns a valid plan for odd `t`, preferring the closed form (exists
/// whenever `a` or `b` is even, or `t = 1`) and falling back to a bounded
/// backtracking search. Plans are cached by `(t, a, b)` and re-validated on
/// load.
pub fn shift_plan(t: u64, a: usize, b: usize, cache: &Cache) -> Result<ShiftPlan> {
    if t == 0 || t % 2 == 0 {
        return Err(Error::invalid(format!("shift plans need odd t, got {t}")));
    }
    if a == 0 || b == 0 {
        return Err(Error::invalid("shift plans need a positive shape"));
    }
    let key = format!("plan-t{t}-a{a}-b{b}");
    if let Some(plan) = cache.load::<ShiftPlan>(&key) {
        if (plan.t, plan.a, plan.b) == (t, a, b) && plan.is_valid() {
            return Ok(plan);
        }
    }
    let plan = match closed_form_plan(t, a, b).filter(ShiftPlan::is_valid) {
        Some(plan) => plan,
        None => search_plan(t, a, b)?,
    };
    if !plan.is_valid() {
        return Err(Error::VerifyGate(format!("shift plan ({t},{a},{b}) failed validation")));
    }
    let _ = cache.store(&key, &plan);
    Ok(plan)
}

/// Centered representative of `x mod t` in `{−(t−1)/2, …, (t−1)/2}`.
fn centered(t: u64, x: u64) -> i64 {
    let s = (t - 1) / 2;
    let r = x % t;
    if r <= s {
        r as i64
    } else {
        r as i64 - t as i64
    }
}

/// Per-index sequences `Z_t → {−s..s}`, each a bijection, whose pointwise
/// sum over a length-`len` list is zero: pairs `(f, −f)` when `len` is
/// even, otherwise `f, g, h` (with `f + g + h = 0` pointwise) and then
/// pairs. `None` when `len < 3` is odd.
fn zero_sum_sequences(t: u64, len: usize) -> Option<Vec<Vec<i64>>> {
    let f: Vec<i64> = (0..t).map(|k| centered(t, k)).collect();
    let nf: Vec<i64> = f.iter().map(|v| -v).collect();
    let mut seqs = Vec::with_capacity(len);
    if len % 2 == 1 {
        if len < 3 {
            return None;
        }
        let s = (t - 1) / 2;
        let g: Vec<i64> = (0..t).map(|k| centered(t, k + s)).collect();
        let h: Vec<i64> = (0..t).map(|k| -f[k as usize] - g[k as usize]).collect();
        seqs.push(f.clone());
        seqs.push(g);
        seqs.push(h);
    }
    while seqs.len() < len {
        seqs.push(f.clone());
        seqs.push(nf.clone());
    }
    Some(seqs)
}

fn closed_form_plan(t: u64, a: usize, b: usize) -> Option<ShiftPlan> {
    if t == 1 {
        return Some(ShiftPlan { t, a, b, arrays: vec![vec![vec![0; b]; a]; 1] });
    }
    let arrays: Vec<Vec<Vec<i64>>> = if b % 2 == 0 {
        // Column pairs cancel rowwise; per-row sequences cancel columnwise.
        let seqs = zero_sum_sequences(t, a)?;
        (0..t)
            .map(|k| {
                (0..a)
                    .map(|i| {
                        (0..b)
                            .map(|j| if j % 2 == 0 { 1 } else { -1 } * seqs[i][k as usize])
                            .collect()
                    })
                    .collect()
            })
            .collect()
    } else if a % 2 == 0 {
        let seqs = zero_sum_sequences(t, b)?;
        (0..t)
            .map(|k| {
                (0..a)
                    .map(|i| {
                        (0..b)
                            .map(|j| if i % 2 == 0 { 1 } else { -1 } * seqs[j][k as usize])
                            .collect()
                    })
                    .collect()
            })
            .collect()
    } else {
        return None;
    };
    Some(ShiftPlan { t, a, b, arrays })
}

/// Bounded backtracking over centered residues for shapes the closed form
/// misses (both sides odd). Cells are filled array by array, row-major,
/// with per-position fiber bookkeeping and row/column forcing.
fn search_plan(t: u64, a: usize, b: usize) -> Result<ShiftPlan> {
    let s = ((t - 1) / 2) as i64;
    let positions = a * b;
    let total = t as usize * positions;
    let mut values = vec![0i64; total];
    // fiber_used[(i*b + j) * t + (v + s)] marks v taken at position (i, j).
    let mut fiber_used = vec![false; positions * t as usize];
    let mut row_sum = vec![0i64; t as usize * a];
    let mut col_sum = vec![0i64; t as usize * b];
    let mut cell = 0usize;
    let mut nodes = 0u64;
    // Iterative backtracking: `values[cell]` holds the candidate currently
    // under trial; `probe` is the next value to try at this cell.
    let mut probe = vec![-s; total];
    while cell < total {
        nodes += 1;
        if nodes > PLAN_SEARCH_MAX_NODES {
            return Err(Error::Budget {
                nodes,
                hint: Some(format!("no shift plan found for (t={t}, {a}x{b})")),
            });
        }
        let k = cell / positions;
        let pos = cell % positions;
        let (i, j) = (pos / b, pos % b);
        let (ri, ci) = (k * a + i, k * b + j);
        let mut placed = false;
        let mut v = probe[cell];
        while v <= s {
            let fiber = pos * t as usize + (v + s) as usize;
            let row_ok = if j == b - 1 {
                row_sum[ri] + v == 0
            } else {
                (row_sum[ri] + v).abs() <= s * (b - 1 - j) as i64
            };
            let col_ok = if i == a - 1 {
                col_sum[ci] + v == 0
            } else {
                (col_sum[ci] + v).abs() <= s * (a - 1 - i) as i64
            };
            if !fiber_used[fiber] && row_ok && col_ok {
                fiber_used[fiber] = true;
                row_sum[ri] += v;
                col_sum[ci] += v;
                values[cell] = v;
                probe[cell] = v + 1;
                placed = true;
                break;
            }
            v += 1;
        }
        if placed {
            cell += 1;
            if cell < total {
                probe[cell] = -s;
            }
        } else {
            // Exhausted this cell: undo the previous placement and retry it.
            if cell == 0 {
                return Err(Error::Budget {
                    nodes,
                    hint: Some(format!("no shift plan exists for (t={t}, {a}x{b})")),
                });
            }
            cell -= 1;
            let k = cell / positions;
            let pos = cell % positions;
            let (i, j) = (pos / b, pos % b);
            let v = values[cell];
            fiber_used[pos * t as usize + (v + s) as usize] = false;
            row_sum[k * a + i] -= v;
            col_sum[k * b + j] -= v;
        }
    }
    let arrays = (0..t as usize)
        .map(|k| {
            (0..a)
                .map(|i| (0..b).map(|j| values[k * positions + i * b + j]).collect())
                .collect()
        })
        .collect();
    Ok(ShiftPlan { t, a, b, arrays })
}

/// Multiplies the first factor by odd `t`: entries `(x, rest)` become
/// `(t·x + plan[k][i][j], rest)` for each of the `t` plan arrays `k`, so
/// each source array yields `t` arrays and the centered offsets tile every
/// residue class exactly once.
pub fn odd_lift(source: &RectSet, t: u64, cache: &Cache) -> Result<RectSet> {
    require_complete_star(source, "odd_lift")?;
    if t % 2 == 0 {
        return Err(Error::invalid(format!("odd_lift needs odd t, got {t}")));
    }
    if t == 1 {
        return Ok(source.clone());
    }
    let plan = shift_plan(t, source.a, source.b, cache)?;
    let mut factors = source.group.factors().to_vec();
    factors[0] *= t;
    let g2 = Group::new(factors)?;
    let arrays: Vec<RectArray> = source
        .arrays
        .iter()
        .flat_map(|arr| {
            plan.arrays.iter().map(|shifts| {
                let entries = (0..arr.rows)
                    .flat_map(|i| (0..arr.cols).map(move |j| (i, j)))
                    .map(|(i, j)| {
                        let mut coords: Vec<i64> =
                            arr.entry(i, j).coords().iter().map(|&x| x as i64).collect();
                        coords[0] = coords[0] * t as i64 + shifts[i][j];
                        g2.element(&coords)
                    })
                    .collect();
                RectArray { rows: arr.rows, cols: arr.cols, entries }
            })
        })
        .collect();
    gated(
        RectSet {
            gamma: g2.zero(),
            delta: g2.zero(),
            group: g2,
            a: source.a,
            b: source.b,
            c: source.c * t as usize,
            hole: None,
            arrays,
        },
        "odd_lift",
    )
}

/// Extends the group by an odd direct summand: one appended coordinate per
/// canonical factor of `g2`, each driven by its own shift plan, multiplying
/// the array count by `|g2|`.
pub fn direct_sum_lift(source: &RectSet, g2: &Group, cache: &Cache) -> Result<RectSet> {
    require_complete_star(source, "direct_sum_lift")?;
    if g2.order() % 2 == 0 {
        return Err(Error::invalid(format!("direct_sum_lift needs an odd summand, got {g2}")));
    }
    let mut current = source.clone();
    for &q in g2.canonicalize().target().factors() {
        if q == 1 {
            continue;
        }
        let plan = shift_plan(q, current.a, current.b, cache)?;
        let mut factors = current.group.factors().to_vec();
        factors.push(q);
        let grown = Group::new(factors)?;
        let arrays: Vec<RectArray> = current
            .arrays
            .iter()
            .flat_map(|arr| {
                plan.arrays.iter().map(|shifts| {
                    let entries = (0..arr.rows)
                        .flat_map(|i| (0..arr.cols).map(move |j| (i, j)))
                        .map(|(i, j)| {
                            let mut coords: Vec<i64> =
                                arr.entry(i, j).coords().iter().map(|&x| x as i64).collect();
                            coords.push(shifts[i][j]);
                            grown.element(&coords)
                        })
                        .collect();
                    RectArray { rows: arr.rows, cols: arr.cols, entries }
                })
            })
            .collect();
        current = RectSet {
            gamma: grown.zero(),
            delta: grown.zero(),
            a: current.a,
            b: current.b,
            c: current.c * q as usize,
            group: grown,
            hole: None,
            arrays,
        };
    }
    gated(current, "direct_sum_lift")
}

fn require_complete_star(source: &RectSet, op: &str) -> Result<()> {
    if source.hole.is_some() {
        return Err(Error::invalid(format!("{op} needs a complete set")));
    }
    if !source.gamma.is_zero() || !source.delta.is_zero() {
        return Err(Error::invalid(format!("{op} needs zero row and column sums")));
    }
    Ok(())
}
