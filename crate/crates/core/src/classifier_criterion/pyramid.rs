use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A node of the pyramid: the compositum of its two children one level down.
/// Level 0 holds the places `P_j` of `K(x_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidNode {
    /// `e` over the left child.
    pub left_edge: u32,
    /// `e` over the right child.
    pub right_edge: u32,
    /// `e` over the base place at the bottom of the left spine.
    pub over_left_base: u32,
    /// `e` over the base place at the bottom of the right spine.
    pub over_right_base: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidTrace {
    /// `levels[l][j]` is the node above `P_j, ..., P_{j+l}`; level 0 are the base places.
    pub levels: Vec<Vec<PyramidNode>>,
    /// `e(Q|P_i) = 1` for the place `Q` below the top, and `e(Q'|Q) > 1` at the top.
    pub unramified_then_ramified: bool,
    /// Every left edge on the left spine equals 3.
    pub totally_ramified_chain: bool,
}

impl PyramidTrace {
    pub fn top(&self) -> &PyramidNode {
        &self.levels.last().expect("nonempty")[0]
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Propagates ramification indices up the pyramid by Abhyankar's lemma.
///
/// `base[j]` is `e(P'_{j+1}|P_j)`, the index of the step `K(x_j, x_{j+1})`
/// over `K(x_j)`; each step is taken unramified over `K(x_{j+1})`.
pub fn pyramid_trace(base: &[u32], levels: usize, characteristic: u64) -> Result<PyramidTrace> {
    if levels == 0 || levels > base.len() {
        return Err(Error::InvalidArgument(format!(
            "levels must lie in 1..={} for {} base steps",
            base.len(),
            base.len()
        )));
    }
    if base.contains(&0) {
        return Err(Error::InvalidArgument("ramification index 0".into()));
    }
    if let Some(&e) = base.iter().find(|&&e| (e as u64).is_multiple_of(characteristic)) {
        return Err(Error::WildIndex { index: e, characteristic });
    }
    let unit = PyramidNode { left_edge: 1, right_edge: 1, over_left_base: 1, over_right_base: 1 };
    let mut grid = vec![vec![unit; base.len() + 1]];
    grid.push(
        base.iter()
            .map(|&e| PyramidNode { left_edge: e, right_edge: 1, over_left_base: e, over_right_base: 1 })
            .collect(),
    );
    for level in 2..=levels {
        let below = &grid[level - 1];
        let row = below
            .windows(2)
            .map(|pair| {
                let (l, r) = (pair[0], pair[1]);
                let lcm = l.right_edge / gcd(l.right_edge, r.left_edge) * r.left_edge;
                let left_edge = lcm / l.right_edge;
                let right_edge = lcm / r.left_edge;
                PyramidNode {
                    left_edge,
                    right_edge,
                    over_left_base: l.over_left_base * left_edge,
                    over_right_base: r.over_right_base * right_edge,
                }
            })
            .collect();
        grid.push(row);
    }
    let q_prime = grid[levels][0];
    let q_over_base = if levels == 1 { 1 } else { grid[levels - 1][0].over_right_base };
    let unramified_then_ramified = q_over_base == 1 && q_prime.left_edge > 1;
    let totally_ramified_chain = (1..=levels).all(|l| grid[l][0].left_edge == 3);
    Ok(PyramidTrace { levels: grid, unramified_then_ramified, totally_ramified_chain })
}
