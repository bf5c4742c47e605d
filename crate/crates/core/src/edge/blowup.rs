use serde_json::{json, Value};

use crate::action::Sign;

/// One summand `± i_*[F]` of the tangent delta of a weighted blow-up,
/// `F` a bundle on the exceptional divisor `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlowupSummand {
    /// `+ i_*[O_E(E)]`.
    Exceptional,
    /// `− i_*[g^*Q_w ⊗ O_E(−jE)]`.
    Twisted { weight: u64, rank: usize, j: u64 },
}

impl BlowupSummand {
    pub fn sign(&self) -> Sign {
        match self {
            BlowupSummand::Exceptional => Sign::Plus,
            BlowupSummand::Twisted { .. } => Sign::Minus,
        }
    }

    fn rank_on_e(&self) -> usize {
        match self {
            BlowupSummand::Exceptional => 1,
            BlowupSummand::Twisted { rank, .. } => *rank,
        }
    }
}

/// `[T_Z̃] − [f^*T_Z]` for the weighted blow-up along a locus with normal
/// pieces `(w, rank Q_w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupDelta {
    pub summands: Vec<BlowupSummand>,
}

pub fn blowup_tangent_delta(pieces: &[(u64, usize)]) -> BlowupDelta {
    let mut summands = vec![BlowupSummand::Exceptional];
    for &(weight, rank) in pieces {
        for j in 0..weight {
            summands.push(BlowupSummand::Twisted { weight, rank, j });
        }
    }
    BlowupDelta { summands }
}

impl BlowupDelta {
    /// Rank on `Z̃`: every summand is supported on `E`.
    pub fn rank(&self) -> i64 {
        0
    }

    /// Coefficient of `[E]` in `c1`: a sheaf `i_*F` has `c1 = rank(F)·[E]`.
    pub fn c1_coefficient(&self) -> i64 {
        self.summands
            .iter()
            .map(|s| s.sign().factor() * s.rank_on_e() as i64)
            .sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank(),
            "c1_E": self.c1_coefficient(),
            "summands": self.summands.iter().map(|s| match s {
                BlowupSummand::Exceptional => json!({"sign": "+", "bundle": "O_E(E)"}),
                BlowupSummand::Twisted { weight, rank, j } =>
                    json!({"sign": "-", "bundle": format!("Q_{weight}(rank {rank}) x O_E(-{j}E)")}),
            }).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(blowup_tangent_delta(&[(1, 2)]).c1_coefficient(), -1);
        assert_eq!(blowup_tangent_delta(&[(1, 1)]).c1_coefficient(), 0);
        let d = blowup_tangent_delta(&[(1, 1), (2, 1)]);
        assert_eq!(d.c1_coefficient(), -2);
        assert_eq!(d.summands.len(), 4);
        assert_eq!(d.rank(), 0);
    }
}
