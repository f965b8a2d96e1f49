//! Minimal double-double arithmetic for the moment/cumulant conversions.
//!
//! The composition sums behind those conversions mix terms whose magnitudes
//! span many orders; accumulating them in a hi/lo pair keeps the final
//! rounding at the f64 output boundary instead of growing with the term count.

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

// Veltkamp splitting; avoids relying on a hardware fma.
fn split(a: f64) -> (f64, f64) {
    let c = 134_217_729.0 * a; // 2^27 + 1
    let hi = c - (c - a);
    (hi, a - hi)
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    pub fn zero() -> Self {
        Dd { hi: 0.0, lo: 0.0 }
    }

    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion of an unsigned integer (multinomials fit in u64 up to 20!).
    pub fn from_u64(m: u64) -> Self {
        let hi = m as f64;
        let lo = m.wrapping_sub(hi as u64) as i64 as f64;
        Dd { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, other.hi);
        let (h, l) = quick_two_sum(s1, s2 + self.lo + other.lo);
        Dd { hi: h, lo: l }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, other.hi);
        let p2 = p2 + self.hi * other.lo + self.lo * other.hi;
        let (h, l) = quick_two_sum(p1, p2);
        Dd { hi: h, lo: l }
    }

    pub fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let (p1, p2) = two_prod(q1, d);
        let r = self.sub(Dd { hi: p1, lo: p2 });
        let q2 = (r.hi + r.lo) / d;
        let (h, l) = quick_two_sum(q1, q2);
        Dd { hi: h, lo: l }
    }
}
