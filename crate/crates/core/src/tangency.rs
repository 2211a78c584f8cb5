//! Index arithmetic of Morse tangencies between a probe surface and the fibers.

/// Counts of elliptic and hyperbolic tangencies of each sign.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TangencyData {
    pub e_plus: i64,
    pub h_plus: i64,
    pub e_minus: i64,
    pub h_minus: i64,
}

impl TangencyData {
    pub fn new(e_plus: i64, h_plus: i64, e_minus: i64, h_minus: i64) -> Self {
        assert!(e_plus >= 0 && h_plus >= 0 && e_minus >= 0 && h_minus >= 0, "tangency counts are nonnegative");
        TangencyData { e_plus, h_plus, e_minus, h_minus }
    }

    /// `(I₊, I₋)`.
    pub fn indices(&self) -> (i64, i64) {
        (self.e_plus - self.h_plus, self.e_minus - self.h_minus)
    }
}

/// `(χ(Σ), I₊ − I₋, χ₋(Σ))`, the last assuming no sphere or disk components.
pub fn euler_and_pairing(i_plus: i64, i_minus: i64) -> (i64, i64, i64) {
    let chi = i_plus + i_minus;
    (chi, i_plus - i_minus, chi.abs())
}

/// Both indices of one sign (zero counts as either).
pub fn signs_agree(i_plus: i64, i_minus: i64) -> bool {
    i_plus * i_minus >= 0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegionCheck {
    pub i_plus: i64,
    pub i_minus: i64,
    /// `Var·ρ° ≥ |I₊ − I₋| − |I₊ + I₋|`
    pub first: bool,
    /// `½·Var·ρ° ≥ I₋`
    pub second: bool,
    /// `I₊ ≤ 0`
    pub third: bool,
    pub feasible: bool,
    pub signs_agree: bool,
}

pub fn region_check(var: i64, rho: i64, t: &TangencyData) -> RegionCheck {
    let (ip, im) = t.indices();
    let a = var * rho;
    let first = a >= (ip - im).abs() - (ip + im).abs();
    let second = a >= 2 * im;
    let third = ip <= 0;
    RegionCheck {
        i_plus: ip,
        i_minus: im,
        first,
        second,
        third,
        feasible: first && second && third,
        signs_agree: signs_agree(ip, im),
    }
}
