//! Exact Euclidean distance transform.
//!
//! Separable lower-envelope algorithm: a column pass followed by a row pass
//! over squared distances. Squared distances are small integers, so the
//! result is exact in `f64`.

/// Per-cell distance (in cells) to the nearest occupied cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ClearanceMap {
    pub rows: usize,
    pub cols: usize,
    pub cells: Vec<f64>,
}

impl ClearanceMap {
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.cells[r * self.cols + c]
    }

    pub fn max(&self) -> f64 {
        self.cells.iter().copied().fold(0.0, f64::max)
    }
}

/// 1D squared distance transform of a sampled function `f` (lower envelope of parabolas).
/// Infinite samples contribute no parabola.
fn dt_1d(f: &[f64], out: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let mut k: isize = -1;
    for (q, &fq) in f.iter().enumerate() {
        if fq == f64::INFINITY {
            continue;
        }
        loop {
            if k < 0 {
                k = 0;
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                break;
            }
            let p = v[k as usize];
            let s = ((fq + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k as usize] {
                k -= 1;
                continue;
            }
            k += 1;
            v[k as usize] = q;
            z[k as usize] = s;
            z[k as usize + 1] = f64::INFINITY;
            break;
        }
    }
    if k < 0 {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    }
    let mut j = 0usize;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < q as f64 {
            j += 1;
        }
        let p = v[j];
        let d = q as f64 - p as f64;
        *o = d * d + f[p];
    }
}

fn squared_transform(occupied: &[bool], rows: usize, cols: usize) -> Vec<f64> {
    let mut grid: Vec<f64> = occupied.iter().map(|o| if *o { 0.0 } else { f64::INFINITY }).collect();
    let n = rows.max(cols);
    let mut f = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for c in 0..cols {
        for r in 0..rows {
            f[r] = grid[r * cols + c];
        }
        dt_1d(&f[..rows], &mut out[..rows], &mut v, &mut z);
        for r in 0..rows {
            grid[r * cols + c] = out[r];
        }
    }
    for r in 0..rows {
        f[..cols].copy_from_slice(&grid[r * cols..(r + 1) * cols]);
        dt_1d(&f[..cols], &mut out[..cols], &mut v, &mut z);
        grid[r * cols..(r + 1) * cols].copy_from_slice(&out[..cols]);
    }
    grid
}

/// Distance transform of a row-major `rows × cols` mask (`true` = occupied).
///
/// A mask with no occupied cell is measured against a virtual occupied ring
/// just outside the grid, so every distance stays finite.
pub fn edt(occupied: &[bool], rows: usize, cols: usize) -> ClearanceMap {
    assert!(rows > 0 && cols > 0, "edt on an empty grid");
    assert_eq!(occupied.len(), rows * cols);
    let cells = if occupied.iter().any(|o| *o) {
        squared_transform(occupied, rows, cols)
            .into_iter()
            .map(f64::sqrt)
            .collect()
    } else {
        let (pr, pc) = (rows + 2, cols + 2);
        let mut padded = vec![false; pr * pc];
        for r in 0..pr {
            for c in 0..pc {
                if r == 0 || c == 0 || r == pr - 1 || c == pc - 1 {
                    padded[r * pc + c] = true;
                }
            }
        }
        let sq = squared_transform(&padded, pr, pc);
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(sq[(r + 1) * pc + c + 1].sqrt());
            }
        }
        cells
    };
    ClearanceMap { rows, cols, cells }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(occ: &[bool], rows: usize, cols: usize) -> Vec<f64> {
        let pts: Vec<(usize, usize)> = (0..rows * cols)
            .filter(|k| occ[*k])
            .map(|k| (k / cols, k % cols))
            .collect();
        (0..rows * cols)
            .map(|k| {
                let (r, c) = (k / cols, k % cols);
                pts.iter()
                    .map(|&(pr, pc)| {
                        let dr = r as f64 - pr as f64;
                        let dc = c as f64 - pc as f64;
                        (dr * dr + dc * dc).sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }

    #[test]
    fn single_source_corner() {
        let mut occ = vec![false; 9];
        occ[0] = true;
        let m = edt(&occ, 3, 3);
        assert_eq!(m.get(2, 2), 8f64.sqrt());
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(0, 2), 2.0);
    }

    #[test]
    fn all_occupied_is_zero() {
        let m = edt(&[true; 12], 3, 4);
        assert!(m.cells.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn all_free_measures_to_the_boundary() {
        let m = edt(&[false; 25], 5, 5);
        assert_eq!(m.get(2, 2), 3.0);
        assert_eq!(m.get(0, 0), 1.0);
        assert_eq!(m.get(0, 2), 1.0);
    }

    #[test]
    fn matches_brute_force_on_fixed_patterns() {
        let rows = 7;
        let cols = 11;
        let occ: Vec<bool> = (0..rows * cols).map(|k| (k * 7919) % 13 == 0).collect();
        let m = edt(&occ, rows, cols);
        assert_eq!(m.cells, brute(&occ, rows, cols));
    }

    proptest::proptest! {
        #[test]
        fn matches_brute_force(bits in proptest::collection::vec(proptest::bool::weighted(0.2), 1..=144), cols in 1usize..=12) {
            let rows = bits.len() / cols;
            proptest::prop_assume!(rows > 0);
            let occ = &bits[..rows * cols];
            proptest::prop_assume!(occ.iter().any(|b| *b));
            let m = edt(occ, rows, cols);
            let b = brute(occ, rows, cols);
            for (x, y) in m.cells.iter().zip(b) {
                proptest::prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }
}
