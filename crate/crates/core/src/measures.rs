//! Discriminative measures over a pattern's per-class support counts.
//!
//! Everything is derived from four integers so that comparisons that must be
//! exact (direction, ties) never go through floating point.

use num_rational::Ratio;

use crate::dataset::{Pattern, TransactionDataset};

/// Support counts of a pattern against the class sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportProfile {
    pub count_pos: u64,
    pub count_neg: u64,
    pub n_pos: u64,
    pub n_neg: u64,
}

/// Which class the pattern is more frequent in, by class-relative support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    PositiveClass,
    NegativeClass,
    Tied,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::PositiveClass => "+",
            Direction::NegativeClass => "-",
            Direction::Tied => "=",
        }
    }
}

impl SupportProfile {
    pub fn new(count_pos: usize, count_neg: usize, n_pos: usize, n_neg: usize) -> Self {
        assert!(count_pos <= n_pos && count_neg <= n_neg, "counts exceed class sizes");
        assert!(n_pos + n_neg > 0, "empty class partition");
        SupportProfile {
            count_pos: count_pos as u64,
            count_neg: count_neg as u64,
            n_pos: n_pos as u64,
            n_neg: n_neg as u64,
        }
    }

    pub fn of(ds: &TransactionDataset, pattern: &Pattern) -> Self {
        let (n_pos, n_neg) = ds.class_counts();
        SupportProfile::new(pattern.count_pos, pattern.count_neg, n_pos, n_neg)
    }

    pub fn n(&self) -> u64 {
        self.n_pos + self.n_neg
    }

    fn frac(&self, num: u64) -> f64 {
        num as f64 / self.n() as f64
    }

    pub fn p_alpha(&self) -> f64 {
        self.frac(self.count_pos + self.count_neg)
    }

    pub fn p_alpha_pos(&self) -> f64 {
        self.frac(self.count_pos)
    }

    pub fn p_alpha_neg(&self) -> f64 {
        self.frac(self.count_neg)
    }

    pub fn q_alpha(&self) -> f64 {
        self.frac(self.n() - self.count_pos - self.count_neg)
    }

    /// Joint probability of absence and class `+`.
    pub fn q_alpha_pos(&self) -> f64 {
        self.frac(self.n_pos - self.count_pos)
    }

    /// Joint probability of absence and class `-`.
    pub fn q_alpha_neg(&self) -> f64 {
        self.frac(self.n_neg - self.count_neg)
    }

    pub fn p_pos(&self) -> f64 {
        self.frac(self.n_pos)
    }

    pub fn p_neg(&self) -> f64 {
        self.frac(self.n_neg)
    }

    pub fn rel_pos(&self) -> f64 {
        ratio_or_zero(self.count_pos, self.n_pos)
    }

    pub fn rel_neg(&self) -> f64 {
        ratio_or_zero(self.count_neg, self.n_neg)
    }

    pub fn rel_pos_exact(&self) -> Ratio<i64> {
        Ratio::new(self.count_pos as i64, self.n_pos.max(1) as i64)
    }

    pub fn rel_neg_exact(&self) -> Ratio<i64> {
        Ratio::new(self.count_neg as i64, self.n_neg.max(1) as i64)
    }

    /// Swaps the roles of the two classes.
    pub fn swapped(&self) -> Self {
        SupportProfile {
            count_pos: self.count_neg,
            count_neg: self.count_pos,
            n_pos: self.n_neg,
            n_neg: self.n_pos,
        }
    }

    // sign of relPos - relNeg via cross-multiplication
    fn cmp_rel(&self) -> std::cmp::Ordering {
        let lhs = self.count_pos as u128 * self.n_neg as u128;
        let rhs = self.count_neg as u128 * self.n_pos as u128;
        lhs.cmp(&rhs)
    }
}

fn ratio_or_zero(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// |relPos - relNeg| as an exact rational.
pub fn diffsup_exact(profile: &SupportProfile) -> Ratio<i64> {
    let d = profile.rel_pos_exact() - profile.rel_neg_exact();
    if d < Ratio::from_integer(0) {
        -d
    } else {
        d
    }
}

/// Difference of class-relative supports.
pub fn diffsup(profile: &SupportProfile) -> f64 {
    let d = diffsup_exact(profile);
    *d.numer() as f64 / *d.denom() as f64
}

/// Growth rate `max/min` of the class-relative supports.
///
/// `+inf` when only one class contains the pattern; `1` when neither does.
pub fn support_ratio(profile: &SupportProfile) -> f64 {
    let (a, b) = (profile.rel_pos(), profile.rel_neg());
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        1.0
    } else if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Pearson statistic of the presence-by-class 2x2 table, no continuity correction.
pub fn chi_square(profile: &SupportProfile) -> f64 {
    let a = profile.count_pos as i128;
    let b = profile.count_neg as i128;
    let c = profile.n_pos as i128 - a;
    let d = profile.n_neg as i128 - b;
    let margins = [a + b, c + d, a + c, b + d];
    if margins.contains(&0) {
        return 0.0;
    }
    let n = (a + b + c + d) as f64;
    let cross = (a * d - b * c) as f64;
    let denom: f64 = margins.iter().map(|&m| m as f64).product();
    n * cross * cross / denom
}

/// Mutual information between pattern presence and class, normalized by H(C).
///
/// Uses the four joint cells (present/absent x +/-) with `0 log 0 = 0`.
pub fn mutual_information(profile: &SupportProfile) -> f64 {
    let SupportProfile {
        count_pos,
        count_neg,
        n_pos,
        n_neg,
    } = *profile;
    if n_pos == 0 || n_neg == 0 || profile.cmp_rel().is_eq() {
        return 0.0;
    }
    if (count_pos == n_pos && count_neg == 0) || (count_pos == 0 && count_neg == n_neg) {
        return 1.0;
    }
    let n = profile.n() as f64;
    let present = (count_pos + count_neg) as f64;
    let absent = n - present;
    let term = |joint: u64, marginal_x: f64, marginal_c: u64| -> f64 {
        if joint == 0 {
            return 0.0;
        }
        let j = joint as f64;
        j / n * (j * n / (marginal_x * marginal_c as f64)).ln()
    };
    let info = term(count_pos, present, n_pos)
        + term(count_neg, present, n_neg)
        + term(n_pos - count_pos, absent, n_pos)
        + term(n_neg - count_neg, absent, n_neg);
    let (pp, pn) = (n_pos as f64 / n, n_neg as f64 / n);
    let entropy = -pp * pp.ln() - pn * pn.ln();
    (info / entropy).clamp(0.0, 1.0)
}

pub fn direction(profile: &SupportProfile) -> Direction {
    match profile.cmp_rel() {
        std::cmp::Ordering::Greater => Direction::PositiveClass,
        std::cmp::Ordering::Less => Direction::NegativeClass,
        std::cmp::Ordering::Equal => Direction::Tied,
    }
}
