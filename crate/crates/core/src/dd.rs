//! Double-double real and complex arithmetic.
//!
//! A [`Dd`] is an unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`, giving
//! about 106 bits of significand. Only the ring and field operations are
//! provided; transcendental functions are taken in `f64` by the callers.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd::from_f64(x)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Mul<f64> for Dd {
    type Output = Dd;
    fn mul(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self - b * q1;
        let q2 = r.hi / b.hi;
        let r = r - b * q2;
        let q3 = r.hi / b.hi;
        let (q1, q2) = quick_two_sum(q1, q2);
        Dd { hi: q1, lo: q2 } + Dd::from_f64(q3)
    }
}

/// Complex double-double.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: Cdd = Cdd {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Cdd {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn from_real(x: f64) -> Self {
        Cdd {
            re: Dd::from_f64(x),
            im: Dd::ZERO,
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn norm_sqr(self) -> Dd {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> Self {
        Cdd {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn scale(self, s: f64) -> Self {
        Cdd {
            re: self.re * s,
            im: self.im * s,
        }
    }
}

impl Neg for Cdd {
    type Output = Cdd;
    fn neg(self) -> Cdd {
        Cdd {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for Cdd {
    type Output = Cdd;
    fn add(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re + b.re,
            im: self.im + b.im,
        }
    }
}

impl Sub for Cdd {
    type Output = Cdd;
    fn sub(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re - b.re,
            im: self.im - b.im,
        }
    }
}

impl Mul for Cdd {
    type Output = Cdd;
    fn mul(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re * b.re - self.im * b.im,
            im: self.re * b.im + self.im * b.re,
        }
    }
}

impl Div for Cdd {
    type Output = Cdd;
    fn div(self, b: Cdd) -> Cdd {
        let den = b.norm_sqr();
        let num = self * b.conj();
        Cdd {
            re: num.re / den,
            im: num.im / den,
        }
    }
}
