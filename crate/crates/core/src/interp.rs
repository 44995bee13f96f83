//! Cubic Hermite interpolation on a single interval.

use crate::scalar::Scalar;

/// Values and slopes at both ends of `[x0, x1]`.
#[derive(Debug, Clone, Copy)]
pub struct HermiteSegment<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
    pub m0: T,
    pub m1: T,
}

impl<T: Scalar> HermiteSegment<T> {
    pub fn eval_unit(&self, s: T) -> T {
        let h = self.x1 - self.x0;
        let (two, three) = (T::lit(2.0), T::lit(3.0));
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = -two * s3 + three * s2;
        let h11 = s3 - s2;
        h00 * self.y0 + h10 * h * self.m0 + h01 * self.y1 + h11 * h * self.m1
    }

    pub fn eval(&self, x: T) -> T {
        self.eval_unit((x - self.x0) / (self.x1 - self.x0))
    }

    /// Zero of the interpolant, assuming `y0` and `y1` bracket it.
    pub fn root(&self) -> T {
        let (mut lo, mut hi) = (T::zero(), T::one());
        let mut f_lo = self.y0;
        if f_lo == T::zero() {
            return self.x0;
        }
        if self.y1 == T::zero() {
            return self.x1;
        }
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = self.eval_unit(mid);
            if f_mid == T::zero() {
                lo = mid;
                hi = mid;
                break;
            }
            if (f_mid > T::zero()) == (f_lo > T::zero()) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        self.x0 + (lo + hi) / T::lit(2.0) * (self.x1 - self.x0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |x: f64| x * x * x - 2.0 * x + 0.5;
        let df = |x: f64| 3.0 * x * x - 2.0;
        let seg = HermiteSegment {
            x0: 0.3,
            x1: 1.7,
            y0: f(0.3),
            y1: f(1.7),
            m0: df(0.3),
            m1: df(1.7),
        };
        for x in [0.3, 0.5, 1.0, 1.6, 1.7] {
            assert!((seg.eval(x) - f(x)).abs() < 1e-13);
        }
        let r = seg.root();
        assert!(f(r).abs() < 1e-12);
        assert!(r > 0.3 && r < 1.7);
    }
}
