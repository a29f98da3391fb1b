use serde::{Deserialize, Serialize};
use std::fmt;

/// The affine map `n -> a*n + b` over the integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineForm {
    pub a: i64,
    pub b: i64,
}

impl AffineForm {
    pub const fn new(a: i64, b: i64) -> Self {
        AffineForm { a, b }
    }

    pub const fn constant(b: i64) -> Self {
        AffineForm { a: 0, b }
    }

    pub fn is_constant(&self) -> bool {
        self.a == 0
    }

    /// Value at `n`, widened so that no intermediate overflows.
    pub fn eval(&self, n: u64) -> i128 {
        self.a as i128 * n as i128 + self.b as i128
    }

    /// The unique non-negative `n` with `a*n + b == value`, if one exists.
    /// A constant form yields `None`; callers handle constants separately.
    pub fn solve(&self, value: i128) -> Option<u64> {
        if self.a == 0 {
            return None;
        }
        let diff = value - self.b as i128;
        let a = self.a as i128;
        if diff % a != 0 {
            return None;
        }
        let n = diff / a;
        u64::try_from(n).ok()
    }

    /// Render with the given parameter name, for example `2k-1`, `k`, `5`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        match self.a {
            0 => return self.b.to_string(),
            1 => out.push_str(var),
            -1 => {
                out.push('-');
                out.push_str(var);
            }
            a => {
                out.push_str(&a.to_string());
                out.push_str(var);
            }
        }
        match self.b {
            0 => {}
            b if b > 0 => {
                out.push('+');
                out.push_str(&b.to_string());
            }
            b => out.push_str(&b.to_string()),
        }
        out
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("n"))
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    num_integer::lcm(a, b)
}
