//! Known-good coefficient tables for 2:1 stepping and the step-size
//! transition rules, kept as golden data.
//!
//! Ticks use the fast step as one unit and the slow step as two.  Rows are
//! labeled by the first set's evaluation times, columns by the second
//! set's, both descending.  Every generated
//! entry must match with zero tolerance.
//!
//! Step names follow the usual 2:1 bookkeeping: (a) the slow set's full
//! step, (b)/(c) the fast set's two half steps; (d..f) the rules right
//! after one set halves its step, (g..i) after one set doubles it,
//! (j)/(k) the shared rules while rejoining a common step size by halving
//! or doubling.  Numeric suffixes count steps since the transition.

use crate::coefficients::{accumulate_full_step, rat, BetaTable, CoeffScalar, Rational};
use crate::time_grid::{Resolution, StepSequence, UnionGrid};

/// Grid window generous enough for every order-4 table.
const LO: i64 = -14;
const HI: i64 = 8;

/// The two step sequences of a named pattern, in ticks.
pub fn pattern_sequences(pattern: &str) -> (Vec<i64>, Vec<i64>) {
    let evens = |lo: i64, hi: i64| (lo..=hi).filter(|t| t % 2 == 0).collect::<Vec<_>>();
    let ints = |lo: i64, hi: i64| (lo..=hi).collect::<Vec<_>>();
    let splice = |coarse: Vec<i64>, fine: Vec<i64>| {
        let mut v = coarse;
        v.extend(fine);
        v
    };
    match pattern {
        // steady state: first set at two-tick steps, second at one
        "steady" => (evens(LO, HI), ints(LO, HI)),
        // second set halves its step at tick 0
        "dec" => (evens(LO, HI), splice(evens(LO, 0), ints(1, HI))),
        // first set doubles its step at tick 0
        "inc" => (splice(ints(LO, 0), evens(2, HI)), ints(LO, HI)),
        // first set halves at tick 0, joining the second
        "togts-dec" => (splice(evens(LO, 0), ints(1, HI)), ints(LO, HI)),
        // second set doubles at tick 0, joining the first
        "togts-inc" => (evens(LO, HI), splice(ints(LO, 0), evens(2, HI))),
        other => panic!("unknown pattern {other:?}"),
    }
}

pub fn pattern_grid(pattern: &str) -> UnionGrid {
    let (a, b) = pattern_sequences(pattern);
    let r = Resolution::new(0);
    UnionGrid::merge(&[
        StepSequence::from_ticks(0, &a, r),
        StepSequence::from_ticks(1, &b, r),
    ])
    .expect("pattern grids are valid")
}

/// Golden tables.  Header: `table NAME order K pattern P set A|B|AB start T`.
/// `set AB` means both sets take the same step and must produce the table.
const GOLDEN: &str = "
table 2a order 2 pattern steady set A start 0
cols 1 0 -1
row 0 9/8 1/2 -1/8
row -2 -3/8 0 -1/8

table 2b order 2 pattern steady set B start 0
cols 0 -1
row 0 3/2 -1/4
row -2 0 -1/4

table 2c order 2 pattern steady set B start 1
cols 1 0
row 0 9/4 -1/2
row -2 -3/4 0

table 2d0 order 2 pattern dec set A start 0
cols 1 0 -2
row 0 9/8 3/8 0
row -2 -3/8 0 -1/8

table 2e0 order 2 pattern dec set B start 0
cols 0 -2
row 0 5/4 0
row -2 0 -1/4

table 2f0 order 2 pattern dec set B start 1
cols 1 0
row 0 9/4 -1/2
row -2 -3/4 0

table 2g0 order 2 pattern inc set A start 0
cols 1 0 -1
row 0 3/2 1/2 0
row -1 -3/4 0 -1/4

table 2h0 order 2 pattern inc set B start 0
cols 0 -1
row 0 3/2 0
row -1 0 -1/2

table 2i0 order 2 pattern inc set B start 1
cols 1 0
row 0 3 -1/2
row -1 -3/2 0

table 2j0 order 2 pattern togts-dec set AB start 0
cols 0 -1
row 0 3/2 -1/4
row -2 0 -1/4

table 2k0 order 2 pattern togts-inc set AB start 0
cols 0 -1
row 0 2 -1/2
row -2 0 -1/2

table 3a order 3 pattern steady set A start 0
cols 1 0 -1 -2
row 0 115/64 7/24 -11/64 0
row -2 -115/96 0 -11/32 5/24
row -4 23/64 0 11/192 0

table 3b order 3 pattern steady set B start 0
cols 0 -1 -2
row 0 23/12 -1/2 0
row -2 0 -1 5/12
row -4 0 1/6 0

table 3c order 3 pattern steady set B start 1
cols 1 0 -1
row 0 115/32 -4/3 5/32
row -2 -115/48 0 5/16
row -4 23/32 0 -5/96

table 3d0 order 3 pattern dec set A start 0
cols 1 0 -2 -4
row 0 5/3 1/4 0 0
row -2 -10/9 0 -2/9 0
row -4 1/3 0 0 1/12

table 3e0 order 3 pattern dec set B start 0
cols 0 -2 -4
row 0 17/12 0 0
row -2 0 -7/12 0
row -4 0 0 1/6

table 3f0 order 3 pattern dec set B start 1
cols 1 0 -2
row 0 10/3 -11/12 0
row -2 -20/9 0 5/36
row -4 2/3 0 0

table 3g0 order 3 pattern inc set A start 0
cols 1 0 -1 -2
row 0 23/8 7/24 0 0
row -1 -23/8 0 -11/24 0
row -2 23/24 0 0 5/24

table 3h0 order 3 pattern inc set B start 0
cols 0 -1 -2
row 0 23/12 0 0
row -1 0 -4/3 0
row -2 0 0 5/12

table 3i0 order 3 pattern inc set B start 1
cols 1 0 -1
row 0 23/4 -4/3 0
row -1 -23/4 0 5/12
row -2 23/12 0 0

table 3g1 order 3 pattern inc set A start 2
cols 3 2 1 0
row 2 23/12 7/24 -11/72 0
row 0 -23/12 0 -11/24 5/24
row -1 23/24 0 11/72 0

table 3h1 order 3 pattern inc set B start 2
cols 2 1 0
row 2 23/12 -4/9 0
row 0 0 -4/3 5/12
row -1 0 4/9 0

table 3i1 order 3 pattern inc set B start 3
cols 3 2 1
row 2 23/6 -4/3 5/36
row 0 -23/6 0 5/12
row -1 23/12 0 -5/36

table 3j0 order 3 pattern togts-dec set AB start 0
cols 0 -1 -2
row 0 23/12 -1/2 0
row -2 0 -1 5/12
row -4 0 1/6 0

table 3j1 order 3 pattern togts-dec set AB start 1
cols 1 0 -1
row 1 23/12 0 -5/36
row 0 0 -4/3 5/12
row -2 0 0 5/36

table 3k0 order 3 pattern togts-inc set AB start 0
cols 0 -1 -2
row 0 19/6 -5/4 0
row -2 0 -5/2 7/6
row -4 0 5/12 0

table 3k1 order 3 pattern togts-inc set AB start 2
cols 2 0 -1
row 2 37/18 0 -5/36
row 0 0 -13/6 5/6
row -2 0 0 5/12

table 4a order 4 pattern steady set A start 0
cols 1 0 -1 -2 -3
row 0 1925/768 -1/12 -55/384 0 3/256
row -2 -1925/768 0 -55/128 7/12 -27/256
row -4 385/256 0 55/384 0 -27/256
row -6 -275/768 0 -11/384 0 3/256

table 4b order 4 pattern steady set B start 0
cols 0 -1 -2 -3
row 0 55/24 -295/384 0 3/128
row -2 0 -295/128 37/24 -27/128
row -4 0 295/384 0 -27/128
row -6 0 -59/384 0 3/128

table 4c order 4 pattern steady set B start 1
cols 1 0 -1 -2
row 0 1925/384 -59/24 185/384 0
row -2 -1925/384 0 185/128 -3/8
row -4 385/128 0 -185/384 0
row -6 -275/384 0 37/384 0

table 4d0 order 4 pattern dec set A start 0
cols 1 0 -2 -4 -6
row 0 833/384 47/384 0 0 0
row -2 -833/384 0 -37/128 0 0
row -4 833/640 0 0 461/1920 0
row -6 -119/384 0 0 0 -25/384

table 4e0 order 4 pattern dec set B start 0
cols 0 -2 -4 -6
row 0 99/64 0 0 0
row -2 0 -187/192 0 0
row -4 0 0 107/192 0
row -6 0 0 0 -25/192

table 4f0 order 4 pattern dec set B start 1
cols 1 0 -2 -4
row 0 833/192 -125/96 0 0
row -2 -833/192 0 19/48 0
row -4 833/320 0 0 -37/480
row -6 -119/192 0 0 0

table 4d1 order 4 pattern dec set A start 2
cols 3 2 1 0 -2
row 2 1925/768 -25/192 -65/768 0 0
row 0 -1925/768 0 -65/256 29/96 0
row -2 385/256 0 65/768 0 -3/64
row -4 -275/768 0 -13/768 0 0

table 4e1 order 4 pattern dec set B start 2
cols 2 1 0 -2
row 2 211/96 -125/192 0 0
row 0 0 -125/64 47/48 0
row -2 0 125/192 0 -3/32
row -4 0 -25/192 0 0

table 4f1 order 4 pattern dec set B start 3
cols 3 2 1 0
row 2 1925/384 -59/24 185/384 0
row 0 -1925/384 0 185/128 -3/8
row -2 385/128 0 -185/384 0
row -4 -275/384 0 37/384 0

table 4g0 order 4 pattern inc set A start 0
cols 1 0 -1 -2 -3
row 0 55/12 -1/12 0 0 0
row -1 -55/8 0 -11/24 0 0
row -2 55/12 0 0 7/12 0
row -3 -55/48 0 0 0 -3/16

table 4h0 order 4 pattern inc set B start 0
cols 0 -1 -2 -3
row 0 55/24 0 0 0
row -1 0 -59/24 0 0
row -2 0 0 37/24 0
row -3 0 0 0 -3/8

table 4i0 order 4 pattern inc set B start 1
cols 1 0 -1 -2
row 0 55/6 -59/24 0 0
row -1 -55/4 0 37/24 0
row -2 55/6 0 0 -3/8
row -3 -55/24 0 0 0

table 4g1 order 4 pattern inc set A start 2
cols 3 2 1 0 -1
row 2 275/96 -1/12 -11/96 0 0
row 0 -275/48 0 -11/16 7/12 0
row -1 275/48 0 11/24 0 -3/16
row -2 -55/32 0 -11/96 0 0

table 4h1 order 4 pattern inc set B start 2
cols 2 1 0 -1
row 2 55/24 -59/96 0 0
row 0 0 -59/16 37/24 0
row -1 0 59/24 0 -3/8
row -2 0 -59/96 0 0

table 4i1 order 4 pattern inc set B start 3
cols 3 2 1 0
row 2 275/48 -59/24 37/96 0
row 0 -275/24 0 37/16 -3/8
row -1 275/24 0 -37/24 0
row -2 -55/16 0 37/96 0

table 4g2 order 4 pattern inc set A start 4
cols 5 4 3 2 1
row 4 165/64 -1/12 -11/80 0 3/320
row 2 -275/96 0 -11/24 7/12 -3/32
row 0 165/64 0 11/48 0 -9/64
row -1 -55/48 0 -11/120 0 3/80

table 4h2 order 4 pattern inc set B start 4
cols 4 3 2 1
row 4 55/24 -59/80 0 3/160
row 2 0 -59/24 37/24 -3/16
row 0 0 59/48 0 -9/32
row -1 0 -59/120 0 3/40

table 4i2 order 4 pattern inc set B start 5
cols 5 4 3 2
row 4 165/32 -59/24 37/80 0
row 2 -275/48 0 37/24 -3/8
row 0 165/32 0 -37/48 0
row -1 -55/24 0 37/120 0

table 4j0 order 4 pattern togts-dec set AB start 0
cols 0 -1 -2 -3
row 0 55/24 -295/384 0 3/128
row -2 0 -295/128 37/24 -27/128
row -4 0 295/384 0 -27/128
row -6 0 -59/384 0 3/128

table 4j1 order 4 pattern togts-dec set AB start 1
cols 1 0 -1 -2
row 1 55/24 0 -37/120 0
row 0 0 -59/24 37/32 0
row -2 0 0 37/48 -3/8
row -4 0 0 -37/480 0

table 4j2 order 4 pattern togts-dec set AB start 2
cols 2 1 0 -1
row 2 55/24 0 0 -3/32
row 1 0 -59/24 0 3/8
row 0 0 0 37/24 -9/16
row -2 0 0 0 -3/32

table 4k0 order 4 pattern togts-inc set AB start 0
cols 0 -1 -2 -3
row 0 9/2 -55/24 0 1/12
row -2 0 -55/8 31/6 -3/4
row -4 0 55/24 0 -3/4
row -6 0 -11/24 0 1/12

table 4k1 order 4 pattern togts-inc set AB start 2
cols 2 0 -1 -2
row 2 8/3 0 -3/8 0
row 0 0 -35/6 27/8 0
row -2 0 0 27/8 -11/6
row -4 0 0 -3/8 0

table 4k2 order 4 pattern togts-inc set AB start 4
cols 4 2 0 -1
row 4 71/30 0 0 -3/40
row 2 0 -17/6 0 3/8
row 0 0 0 8/3 -9/8
row -2 0 0 0 -3/8
";

#[derive(Clone, Debug)]
pub struct GoldenTable {
    pub name: String,
    pub order: usize,
    pub pattern: String,
    /// Which sets take this step (index 0, 1, or both).
    pub sets: Vec<usize>,
    pub start_tick: i64,
    pub row_ticks: Vec<i64>,
    pub col_ticks: Vec<i64>,
    pub entries: Vec<Vec<Rational>>,
}

fn parse_rational(s: &str) -> Rational {
    match s.split_once('/') {
        Some((n, d)) => rat(n.parse().unwrap(), d.parse().unwrap()),
        None => rat(s.parse().unwrap(), 1),
    }
}

pub fn golden_tables() -> Vec<GoldenTable> {
    let mut tables = Vec::new();
    let mut current: Option<GoldenTable> = None;
    for line in GOLDEN.lines() {
        let words: Vec<&str> = line.split_whitespace().collect();
        match words.as_slice() {
            [] => {}
            ["table", name, "order", k, "pattern", p, "set", which, "start", t] => {
                if let Some(t) = current.take() {
                    tables.push(t);
                }
                let sets = match *which {
                    "A" => vec![0],
                    "B" => vec![1],
                    "AB" => vec![0, 1],
                    other => panic!("bad set spec {other}"),
                };
                current = Some(GoldenTable {
                    name: name.to_string(),
                    order: k.parse().unwrap(),
                    pattern: p.to_string(),
                    sets,
                    start_tick: t.parse().unwrap(),
                    row_ticks: Vec::new(),
                    col_ticks: Vec::new(),
                    entries: Vec::new(),
                });
            }
            ["cols", rest @ ..] => {
                current.as_mut().unwrap().col_ticks =
                    rest.iter().map(|s| s.parse().unwrap()).collect();
            }
            ["row", label, rest @ ..] => {
                let t = current.as_mut().unwrap();
                t.row_ticks.push(label.parse().unwrap());
                assert_eq!(rest.len(), t.col_ticks.len(), "row width in {}", t.name);
                t.entries
                    .push(rest.iter().map(|s| parse_rational(s)).collect());
            }
            other => panic!("bad golden line {other:?}"),
        }
    }
    tables.extend(current);
    tables
}

/// Generate every golden table and compare entrywise with zero tolerance.
/// Returns the number of table comparisons performed.
pub fn check_golden_tables() -> Result<usize, String> {
    let mut checked = 0;
    for golden in golden_tables() {
        let grid = pattern_grid(&golden.pattern);
        for &set in &golden.sets {
            let ticks = grid.set_ticks(set).map_err(|e| e.to_string())?;
            let m = ticks
                .iter()
                .position(|&t| t == golden.start_tick)
                .ok_or_else(|| format!("{}: start tick missing", golden.name))?;
            let computed: BetaTable<Rational> = accumulate_full_step(&grid, golden.order, set, m)
                .map_err(|e| format!("{}: {e}", golden.name))?;
            for (i, &row) in golden.row_ticks.iter().enumerate() {
                for (j, &col) in golden.col_ticks.iter().enumerate() {
                    let got = computed
                        .entry_at_ticks(&[row, col])
                        .unwrap_or_else(|| rat(0, 1));
                    if got != golden.entries[i][j] {
                        return Err(format!(
                            "{} set {set}: entry at ({row}, {col}) is {got}, expected {}",
                            golden.name, golden.entries[i][j]
                        ));
                    }
                }
            }
            // no stray nonzero entries outside the reference grid
            for (q, v) in computed.entries() {
                let row = computed.windows[0].tick_of_index(q[0]);
                let col = computed.windows[1].tick_of_index(q[1]);
                let in_grid = golden.row_ticks.contains(&row) && golden.col_ticks.contains(&col);
                if !in_grid && !v.is_zero() {
                    return Err(format!(
                        "{} set {set}: unexpected entry {v} at ({row}, {col})",
                        golden.name
                    ));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}
