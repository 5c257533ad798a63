//! Braid words, plat-closure diagrams, component tracing and writhe.
//!
//! A braid word is a sequence of signed Artin generator indices; letter `+i`
//! crosses strands `i` and `i+1` with the `i+1 -> i` strand passing over,
//! letter `-i` is the inverse crossing. Earlier letters sit above later ones
//! in the diagram. Plat closure caps adjacent odd-even peg pairs at the top
//! and the bottom, so it needs an even strand count.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize > strands.saturating_sub(1) {
                return Err(Error::LetterOutOfRange { letter: l, strands });
            }
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self {
            strands,
            letters: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn crossings(&self) -> usize {
        self.letters.len()
    }

    /// All letter signs flipped (the mirror braid).
    pub fn mirror(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().map(|l| -l).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Text format: line 1 `strands N`, line 2 space-separated signed letters.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "strands {}", self.strands);
        let line: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty braid file".into(),
        })?;
        let strands = header
            .strip_prefix("strands ")
            .and_then(|s| s.trim().parse::<usize>().ok())
            .ok_or(Error::Parse {
                line: 1,
                message: format!("expected 'strands N', got '{header}'"),
            })?;
        let letters = match lines.next() {
            None => Vec::new(),
            Some(l) => l
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<i32>().map_err(|_| Error::Parse {
                        line: 2,
                        message: format!("bad letter '{tok}'"),
                    })
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Self::new(strands, letters)
    }
}

/// Stack `b1` above `b2`.
pub fn compose(b1: &BraidWord, b2: &BraidWord) -> Result<BraidWord> {
    if b1.strands != b2.strands {
        return Err(Error::StrandMismatch {
            left: b1.strands,
            right: b2.strands,
        });
    }
    let mut letters = b1.letters.clone();
    letters.extend_from_slice(&b2.letters);
    Ok(BraidWord {
        strands: b1.strands,
        letters,
    })
}

/// One crossing of the plat diagram: generator position (1-based) and sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub position: usize,
    pub sign: i8,
}

/// Plat closure of a braid word: the crossings in top-to-bottom order plus
/// the implicit caps (top) and cups (bottom) pairing strands (1,2), (3,4), ...
#[derive(Debug, Clone)]
pub struct PlatDiagram {
    strands: usize,
    crossings: Vec<Crossing>,
}

impl PlatDiagram {
    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }
}

pub fn plat_close(b: &BraidWord) -> Result<PlatDiagram> {
    if !b.strands.is_multiple_of(2) {
        return Err(Error::OddStrands(b.strands));
    }
    let crossings = b
        .letters
        .iter()
        .map(|&l| Crossing {
            position: l.unsigned_abs() as usize,
            sign: if l > 0 { 1 } else { -1 },
        })
        .collect();
    Ok(PlatDiagram {
        strands: b.strands,
        crossings,
    })
}

/// Vertical traversal direction through a crossing layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Vertical {
    Down,
    Up,
}

/// Oriented traversal data for one crossing: the vertical direction of the
/// strand running top-left to bottom-right (`nw_se`) and of the strand
/// running top-right to bottom-left (`ne_sw`).
#[derive(Debug, Clone, Copy)]
struct CrossingTraversal {
    sign: i8,
    nw_se: Vertical,
    ne_sw: Vertical,
}

/// The plat diagram resolved into oriented closed components.
///
/// Each component is oriented deterministically: the traversal starts at the
/// leftmost-topmost cap it touches and heads downward into the cap's left leg.
#[derive(Debug, Clone)]
pub struct OrientedLink {
    components: usize,
    traversals: Vec<CrossingTraversal>,
}

impl OrientedLink {
    pub fn components(&self) -> usize {
        self.components
    }
}

/// Ports are (level, column) points; level 0 is the top boundary (caps),
/// level m the bottom boundary (cups). Columns are 1-based.
fn layer_exit(diagram: &PlatDiagram, level: usize, col: usize, down: bool) -> (usize, usize) {
    // moving from `level` through the adjacent crossing layer
    let row = if down { level } else { level - 1 };
    let next_level = if down { level + 1 } else { level - 1 };
    let c = diagram.crossings[row];
    let next_col = if col == c.position {
        c.position + 1
    } else if col == c.position + 1 {
        c.position
    } else {
        col
    };
    (next_level, next_col)
}

pub fn trace_components(diagram: &PlatDiagram) -> OrientedLink {
    let n = diagram.strands;
    let m = diagram.crossings.len();
    let mut traversals: Vec<Option<(Option<Vertical>, Option<Vertical>)>> =
        vec![Some((None, None)); m];
    // visited[level][col-1] per vertical passage direction does not matter:
    // each port is crossed exactly once per component arc.
    let mut visited = vec![vec![false; n]; m + 1];
    let mut components = 0;

    for start_cap in 0..n / 2 {
        let start = (0usize, 2 * start_cap + 1);
        if visited[start.0][start.1 - 1] {
            continue;
        }
        components += 1;
        // Head downward into the left leg of the cap.
        let mut pos = start;
        let mut going_down = true;
        loop {
            visited[pos.0][pos.1 - 1] = true;
            // move through a layer, or bounce on the boundary pairing
            if going_down && pos.0 == m {
                // bottom cup: move to the partner column, then go up
                let partner = if pos.1 % 2 == 1 { pos.1 + 1 } else { pos.1 - 1 };
                pos = (m, partner);
                going_down = false;
            } else if !going_down && pos.0 == 0 {
                // top cap
                let partner = if pos.1 % 2 == 1 { pos.1 + 1 } else { pos.1 - 1 };
                pos = (0, partner);
                going_down = true;
            } else {
                let row = if going_down { pos.0 } else { pos.0 - 1 };
                let col = pos.1;
                let c = diagram.crossings[row];
                if col == c.position || col == c.position + 1 {
                    // record the traversal direction of this strand
                    let dir = if going_down { Vertical::Down } else { Vertical::Up };
                    let entry = traversals[row].as_mut().unwrap();
                    // nw_se strand enters the layer at top column `position`
                    // (when going down) or at bottom column `position + 1`
                    // (when going up).
                    let is_nw_se = (going_down && col == c.position)
                        || (!going_down && col == c.position + 1);
                    if is_nw_se {
                        entry.0 = Some(dir);
                    } else {
                        entry.1 = Some(dir);
                    }
                }
                pos = layer_exit(diagram, pos.0, pos.1, going_down);
            }
            if pos == start && going_down {
                break;
            }
            if visited[pos.0][pos.1 - 1] && pos == start {
                break;
            }
        }
    }

    let traversals = traversals
        .into_iter()
        .zip(&diagram.crossings)
        .map(|(t, c)| {
            let (nw, ne) = t.unwrap();
            CrossingTraversal {
                sign: c.sign,
                nw_se: nw.expect("every crossing strand is traversed"),
                ne_sw: ne.expect("every crossing strand is traversed"),
            }
        })
        .collect();

    OrientedLink {
        components,
        traversals,
    }
}

/// Signed crossing count of the oriented diagram.
///
/// A crossing counts +1 when rotating the under-strand direction
/// counterclockwise by a quarter turn aligns it with the over-strand
/// direction (x to the right, y upward). With this rule the single crossing
/// of `sigma_1` plat-closed in B_2 comes out +1, which is exactly the
/// calibration that makes the normalized bracket of that unknot equal 1.
pub fn writhe(link: &OrientedLink) -> i64 {
    let mut w = 0i64;
    for t in &link.traversals {
        // 2D direction vectors (dx, dy), y upward, for each strand.
        let nw_se = match t.nw_se {
            Vertical::Down => (1.0, -1.0),
            Vertical::Up => (-1.0, 1.0),
        };
        let ne_sw = match t.ne_sw {
            Vertical::Down => (-1.0, -1.0),
            Vertical::Up => (1.0, 1.0),
        };
        // sign = +1: over-strand for a positive letter is ne_sw
        // (the i+1 -> i strand passes over); for a negative letter, nw_se.
        let (over, under) = if t.sign > 0 {
            (ne_sw, nw_se)
        } else {
            (nw_se, ne_sw)
        };
        let cross_z = under.0 * over.1 - under.1 * over.0;
        w += if cross_z > 0.0 { 1 } else { -1 };
    }
    w
}

/// Writhe of a braid word's plat closure under the deterministic orientation.
pub fn plat_writhe(b: &BraidWord) -> Result<i64> {
    Ok(writhe(&trace_components(&plat_close(b)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(n: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(n, letters.to_vec()).unwrap()
    }

    #[test]
    fn compose_concatenates() {
        let a = bw(2, &[1]);
        let b = bw(2, &[-1]);
        assert_eq!(compose(&a, &b).unwrap().letters(), &[1, -1]);

        let empty = BraidWord::identity(4);
        let c = bw(4, &[2, -3]);
        assert_eq!(compose(&empty, &c).unwrap(), c);

        assert_eq!(
            compose(&bw(4, &[1]), &bw(4, &[2])).unwrap().letters(),
            &[1, 2]
        );
    }

    #[test]
    fn compose_rejects_strand_mismatch() {
        assert!(compose(&bw(2, &[1]), &bw(4, &[1])).is_err());
    }

    #[test]
    fn letters_validated() {
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(2, vec![0]).is_err());
        assert!(BraidWord::new(4, vec![3, -3]).is_ok());
    }

    #[test]
    fn plat_needs_even_strands() {
        assert!(plat_close(&bw(3, &[1])).is_err());
    }

    #[test]
    fn identity_plat_components() {
        // identity in B_2: one loop; identity in B_4: two loops
        assert_eq!(trace_components(&plat_close(&BraidWord::identity(2)).unwrap()).components(), 1);
        assert_eq!(trace_components(&plat_close(&BraidWord::identity(4)).unwrap()).components(), 2);
    }

    #[test]
    fn single_crossings_merge_components() {
        // sigma_1 in B_2: one component
        assert_eq!(trace_components(&plat_close(&bw(2, &[1])).unwrap()).components(), 1);
        // sigma_2 in B_4 merges the two cap loops into one component
        assert_eq!(trace_components(&plat_close(&bw(4, &[2])).unwrap()).components(), 1);
        // sigma_1^3 in B_2: still a single closed component
        assert_eq!(trace_components(&plat_close(&bw(2, &[1, 1, 1])).unwrap()).components(), 1);
    }

    #[test]
    fn writhe_of_identity_is_zero() {
        assert_eq!(plat_writhe(&BraidWord::identity(4)).unwrap(), 0);
    }

    #[test]
    fn writhe_calibration_sign() {
        // Calibrated so that sigma_1 in B_2 carries +1; sigma_1^3 is then +3.
        assert_eq!(plat_writhe(&bw(2, &[1])).unwrap(), 1);
        assert_eq!(plat_writhe(&bw(2, &[-1])).unwrap(), -1);
        assert_eq!(plat_writhe(&bw(2, &[1, 1, 1])).unwrap(), 3);
    }

    #[test]
    fn writhe_cancels_reidemeister_ii_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = 2 * rng.random_range(1..=3usize);
            let len = rng.random_range(0..8);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let i = rng.random_range(1..n as i32);
                    if rng.random_bool(0.5) {
                        i
                    } else {
                        -i
                    }
                })
                .collect();
            let b = bw(n, &letters);
            let w0 = plat_writhe(&b).unwrap();
            let i = rng.random_range(1..n as i32);
            let mut with_pair = letters.clone();
            let at = rng.random_range(0..=with_pair.len());
            with_pair.splice(at..at, [i, -i]);
            let w1 = plat_writhe(&bw(n, &with_pair)).unwrap();
            assert_eq!(w0, w1);
        }
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let b = bw(4, &[1, -2, 3, -3]);
        let text = b.to_text();
        assert_eq!(text, "strands 4\n1 -2 3 -3\n");
        let back = BraidWord::from_text(&text).unwrap();
        assert_eq!(back, b);
        assert_eq!(back.to_text(), text);

        let id = BraidWord::identity(2);
        assert_eq!(BraidWord::from_text(&id.to_text()).unwrap(), id);
    }
}
