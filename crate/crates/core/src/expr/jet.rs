use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Truncated Taylor arithmetic. `chain` composes with a scalar function
/// whose value and first three derivatives at `self.value()` are given.
pub(crate) trait Taylor:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(c: f64) -> Self;
    fn value(&self) -> f64;
    fn chain(self, f: [f64; 4]) -> Self;
}

impl Taylor for f64 {
    fn constant(c: f64) -> Self {
        c
    }

    fn value(&self) -> f64 {
        *self
    }

    fn chain(self, f: [f64; 4]) -> Self {
        f[0]
    }
}

/// Value and first three derivatives in one variable.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64, d3: f64) -> Self {
        Jet { value, d1, d2, d3 }
    }

    pub fn variable(at: f64) -> Self {
        Jet::new(at, 1.0, 0.0, 0.0)
    }

    pub(crate) fn truncated(mut self, order: usize) -> Self {
        if order < 3 {
            self.d3 = 0.0;
        }
        if order < 2 {
            self.d2 = 0.0;
        }
        if order < 1 {
            self.d1 = 0.0;
        }
        self
    }

    /// Derivative slot `k` (0 = value).
    pub fn derivative(&self, k: usize) -> f64 {
        match k {
            0 => self.value,
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            _ => 0.0,
        }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet::new(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d3 + o.d3)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet::new(self.value - o.value, self.d1 - o.d1, self.d2 - o.d2, self.d3 - o.d3)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet::new(-self.value, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let (u, v) = (self, o);
        Jet::new(
            u.value * v.value,
            u.d1 * v.value + u.value * v.d1,
            u.d2 * v.value + 2.0 * u.d1 * v.d1 + u.value * v.d2,
            u.d3 * v.value + 3.0 * (u.d2 * v.d1 + u.d1 * v.d2) + u.value * v.d3,
        )
    }
}

impl Taylor for Jet {
    fn constant(c: f64) -> Self {
        Jet::new(c, 0.0, 0.0, 0.0)
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn chain(self, f: [f64; 4]) -> Self {
        let (u1, u2, u3) = (self.d1, self.d2, self.d3);
        Jet::new(
            f[0],
            f[1] * u1,
            f[2] * u1 * u1 + f[1] * u2,
            f[3] * u1 * u1 * u1 + 3.0 * f[2] * u1 * u2 + f[1] * u3,
        )
    }
}

/// Value, gradient and Hessian in two variables.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Jet2 {
    pub value: f64,
    pub du1: f64,
    pub du2: f64,
    pub du1u1: f64,
    pub du1u2: f64,
    pub du2u2: f64,
}

impl Jet2 {
    pub fn constant(c: f64) -> Self {
        Jet2 {
            value: c,
            ..Jet2::default()
        }
    }

    /// Seed for variable `index` (0 or 1) at `at`.
    pub fn variable(at: f64, index: usize) -> Self {
        let mut j = Jet2::constant(at);
        if index == 0 {
            j.du1 = 1.0;
        } else {
            j.du2 = 1.0;
        }
        j
    }

    /// Partial in direction `i` (0 → u1, 1 → u2).
    pub fn partial(&self, i: usize) -> f64 {
        if i == 0 {
            self.du1
        } else {
            self.du2
        }
    }

    pub fn second(&self, i: usize, j: usize) -> f64 {
        match (i, j) {
            (0, 0) => self.du1u1,
            (1, 1) => self.du2u2,
            _ => self.du1u2,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            du1: self.du1 + o.du1,
            du2: self.du2 + o.du2,
            du1u1: self.du1u1 + o.du1u1,
            du1u2: self.du1u2 + o.du1u2,
            du2u2: self.du2u2 + o.du2u2,
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            du1: -self.du1,
            du2: -self.du2,
            du1u1: -self.du1u1,
            du1u2: -self.du1u2,
            du2u2: -self.du2u2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (u, v) = (self, o);
        Jet2 {
            value: u.value * v.value,
            du1: u.du1 * v.value + u.value * v.du1,
            du2: u.du2 * v.value + u.value * v.du2,
            du1u1: u.du1u1 * v.value + 2.0 * u.du1 * v.du1 + u.value * v.du1u1,
            du1u2: u.du1u2 * v.value + u.du1 * v.du2 + u.du2 * v.du1 + u.value * v.du1u2,
            du2u2: u.du2u2 * v.value + 2.0 * u.du2 * v.du2 + u.value * v.du2u2,
        }
    }
}

impl Taylor for Jet2 {
    fn constant(c: f64) -> Self {
        Jet2::constant(c)
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn chain(self, f: [f64; 4]) -> Self {
        let u = self;
        Jet2 {
            value: f[0],
            du1: f[1] * u.du1,
            du2: f[1] * u.du2,
            du1u1: f[2] * u.du1 * u.du1 + f[1] * u.du1u1,
            du1u2: f[2] * u.du1 * u.du2 + f[1] * u.du1u2,
            du2u2: f[2] * u.du2 * u.du2 + f[1] * u.du2u2,
        }
    }
}
