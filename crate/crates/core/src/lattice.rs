//! Følner windows in ℤ^d with exact rational overlap deviations.
//!
//! The window of radius r is the box F_r = {-r,…,r}^d. For a shift g the
//! deviation 1 − |F_r ∩ (g+F_r)|/|F_r| measures how far the window is from
//! being invariant under translation by g; it is computed exactly as a
//! rational number so monotonicity claims can be checked without float slop.

use num_rational::Ratio;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWindow {
    dim: usize,
    radius: i64,
}

impl LatticeWindow {
    pub fn new(dim: usize, radius: i64) -> Self {
        assert!(dim > 0, "lattice dimension must be positive");
        assert!(radius >= 0, "window radius must be nonnegative");
        Self { dim, radius }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// |F_r| = (2r+1)^d.
    pub fn size(&self) -> i64 {
        let side = 2 * self.radius + 1;
        (0..self.dim).fold(1i64, |acc, _| acc * side)
    }

    /// |F_r ∩ (g+F_r)| = ∏_i max(0, 2r+1 − |g_i|).
    pub fn overlap(&self, shift: &[i64]) -> i64 {
        assert_eq!(shift.len(), self.dim, "shift dimension mismatch");
        let side = 2 * self.radius + 1;
        shift.iter().fold(1i64, |acc, &gi| acc * (side - gi.abs()).max(0))
    }

    /// Exact deviation 1 − |F ∩ (g+F)|/|F| ∈ [0, 1].
    pub fn folner_deviation(&self, shift: &[i64]) -> Ratio<i64> {
        Ratio::new(self.size() - self.overlap(shift), self.size())
    }

    /// Points of the window in lexicographic order.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let side = (2 * self.radius + 1) as usize;
        let total = side.pow(self.dim as u32);
        let mut out = Vec::with_capacity(total);
        for mut idx in 0..total {
            let mut p = vec![0i64; self.dim];
            for slot in (0..self.dim).rev() {
                p[slot] = (idx % side) as i64 - self.radius;
                idx /= side;
            }
            out.push(p);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    /// Brute-force overlap by enumerating both translated windows.
    fn overlap_oracle(win: &LatticeWindow, shift: &[i64]) -> i64 {
        let base: HashSet<Vec<i64>> = win.points().into_iter().collect();
        win.points()
            .into_iter()
            .map(|p| p.iter().zip(shift).map(|(a, b)| a + b).collect::<Vec<_>>())
            .filter(|p| base.contains(p))
            .count() as i64
    }

    #[test]
    fn unit_shift_deviation_is_one_over_window_size() {
        for r in 1..=50 {
            let win = LatticeWindow::new(1, r);
            assert_eq!(win.folner_deviation(&[1]), Ratio::new(1, 2 * r + 1));
        }
    }

    #[test]
    fn deviation_matches_enumeration_oracle() {
        for dim in 1..=3usize {
            for r in 0..=3i64 {
                let win = LatticeWindow::new(dim, r);
                for shift_mag in 0..=(2 * r + 2) {
                    let mut shift = vec![0i64; dim];
                    shift[0] = shift_mag;
                    if dim > 1 {
                        shift[dim - 1] = -(shift_mag / 2);
                    }
                    let exact = win.folner_deviation(&shift);
                    let oracle = Ratio::new(win.size() - overlap_oracle(&win, &shift), win.size());
                    assert_eq!(exact, oracle, "dim={dim} r={r} shift={shift:?}");
                }
            }
        }
    }

    #[test]
    fn deviation_is_strictly_decreasing_in_radius_for_fixed_shift() {
        let mut prev = Ratio::new(2, 1);
        for r in 1..=50 {
            let d = LatticeWindow::new(1, r).folner_deviation(&[1]);
            assert!(d < prev, "radius {r} did not decrease");
            prev = d;
        }
    }

    #[test]
    fn far_shift_gives_deviation_one() {
        let win = LatticeWindow::new(2, 2);
        assert_eq!(win.folner_deviation(&[5, 0]), Ratio::new(1, 1));
    }

    #[test]
    fn zero_shift_gives_deviation_zero() {
        let win = LatticeWindow::new(3, 4);
        assert_eq!(win.folner_deviation(&[0, 0, 0]), Ratio::new(0, 1));
    }
}
