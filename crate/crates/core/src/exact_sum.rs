//! Correctly rounded running sums.
//!
//! Ball sums must not depend on the order vertices are visited: the same ball
//! reached from two centers has to give the same average to the last bit, or
//! the spurious differences show up in `Var_p(M f)` (for small `p`,
//! `|d|^p` of a one-ulp `d` is far from negligible). Keeping the exact sum as
//! non-overlapping partials and rounding once makes the result a function of
//! the multiset of summands alone.

/// Enough partials for any sum of finite doubles.
const CAPACITY: usize = 48;

#[derive(Clone, Copy)]
pub(crate) struct ExactSum {
    partials: [f64; CAPACITY],
    len: usize,
    overflow: bool,
}

impl ExactSum {
    pub(crate) const fn new() -> Self {
        ExactSum {
            partials: [0.0; CAPACITY],
            len: 0,
            overflow: false,
        }
    }

    pub(crate) fn add(&mut self, mut x: f64) {
        let mut kept = 0;
        for j in 0..self.len {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                core::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            if !hi.is_finite() {
                self.overflow = true;
                return;
            }
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        self.partials[kept] = x;
        self.len = kept + 1;
    }

    /// The exact sum rounded to nearest, ties to even.
    pub(crate) fn value(&self) -> f64 {
        if self.overflow {
            return f64::INFINITY;
        }
        let p = &self.partials[..self.len];
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            lo = y - (hi - x);
            if lo != 0.0 {
                break;
            }
        }
        // Half-way case: the remaining partials decide the rounding direction.
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
        hi
    }
}
