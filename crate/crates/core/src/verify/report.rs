use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::exactset::FiniteSet;
use crate::quantity::Quantity;

macro_rules! ids {
    ($($variant:ident => $name:literal,)*) => {
        /// Registry identifier of one inequality.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum InequalityId {
            $($variant,)*
        }

        impl InequalityId {
            /// Every entry, sorted by name.
            pub const ALL: &'static [InequalityId] = &[$(InequalityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(InequalityId::$variant => $name,)*
                }
            }
        }

        impl FromStr for InequalityId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self, Error> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($name => Ok(InequalityId::$variant),)*
                    _ => Err(Error::UnknownId(s.to_string())),
                }
            }
        }
    };
}

ids! {
    CorSol => "COR-SOL",
    CsSubs => "CS-SUBS",
    DaLevel => "DA-LEVEL",
    EnergySumset => "ENERGY-SUMSET",
    Er => "ER",
    ErEstFa => "ER-EST-FA",
    ErEstU => "ER-EST-U",
    ErSumF => "ER-SUM-F",
    ErTripleLow => "ER-TRIPLE-LOW",
    GenSigma => "GEN-SIGMA",
    Lemma3 => "LEMMA3",
    LevelSet => "LEVELSET",
    MainA => "MAIN-A",
    MainB => "MAIN-B",
    Prev => "PREV",
    PrevDa => "PREV-DA",
    PropCritP => "PROP-CRIT-P",
    PropCritQ => "PROP-CRIT-Q",
    Small2 => "SMALL2",
    SmallMd => "SMALLMD",
    SmallMdEnergy => "SMALLMD-ENERGY",
    SolPlusP => "SOLPLUS-P",
    SolPlusQ => "SOLPLUS-Q",
    SolyMax => "SOLY-MAX",
    SolyProd => "SOLY-PROD",
    SolyQuot => "SOLY-QUOT",
}

/// Which side is expected to dominate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `lhs ≫ rhs`: the ratio should stay bounded away from zero.
    Lower,
    /// `lhs ≪ rhs`: the ratio should stay bounded.
    Upper,
}

impl InequalityId {
    /// Entries with a stated constant get a pass flag; the rest only a ratio.
    pub fn explicit(self) -> bool {
        use InequalityId::*;
        matches!(self, SolyProd | SolyQuot | CsSubs | Lemma3 | ErSumF | ErEstU | ErEstFa | ErTripleLow)
    }

    pub fn bound_kind(self) -> BoundKind {
        use InequalityId::*;
        match self {
            LevelSet | EnergySumset | DaLevel | GenSigma | Er | SmallMdEnergy => BoundKind::Upper,
            _ => BoundKind::Lower,
        }
    }

    /// Power of the base-2 logarithm in the right-hand side.
    pub(crate) fn rhs_log_power(self) -> f64 {
        use InequalityId::*;
        match self {
            SolyMax => -1.0 / 3.0,
            EnergySumset | Er => 1.0,
            SmallMdEnergy => 0.75,
            SmallMd => -0.5,
            _ => 0.0,
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for InequalityId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for InequalityId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// One inequality evaluated on a concrete set.
///
/// Fields are declared in key order so that the JSON form is canonical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub explicit: bool,
    pub id: InequalityId,
    pub inputs: String,
    pub lhs: Quantity,
    pub pass: Option<bool>,
    pub ratio: Quantity,
    pub rhs: Quantity,
}

impl InequalityReport {
    pub(crate) fn ratio_only(id: InequalityId, lhs: Quantity, rhs: Quantity, inputs: String) -> Self {
        let ratio = lhs.div(&rhs);
        InequalityReport { explicit: false, id, inputs, lhs, pass: None, ratio, rhs }
    }

    /// An explicit entry; `pass` is decided by the caller when the comparison
    /// is not simply `lhs ≥ rhs`.
    pub(crate) fn checked(id: InequalityId, lhs: Quantity, rhs: Quantity, pass: Option<bool>, inputs: String) -> Self {
        let pass = pass.unwrap_or_else(|| lhs.total_cmp(&rhs).is_ge());
        let ratio = lhs.div(&rhs);
        InequalityReport { explicit: true, id, inputs, lhs, pass: Some(pass), ratio, rhs }
    }

    /// The ratio with natural logarithms in place of base-2 ones, for reference.
    /// Only defined for ratio entries whose bound carries a logarithm.
    pub fn ratio_natural_log(&self) -> Option<f64> {
        let power = self.id.rhs_log_power();
        if self.explicit || power == 0.0 {
            return None;
        }
        Some(self.ratio.to_f64() / std::f64::consts::LN_2.powf(power))
    }
}

/// Short stable label for a set: a hash prefix of its canonical form and its size.
pub fn set_digest(a: &FiniteSet) -> String {
    let mut h = Sha256::new();
    for (i, x) in a.iter().enumerate() {
        if i > 0 {
            h.update(b",");
        }
        h.update(x.to_pq().as_bytes());
    }
    let hex: String = h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect();
    format!("A#{hex}(n={})", a.len())
}
