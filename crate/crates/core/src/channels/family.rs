use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::QuantumChannel;
use crate::{Error, Result};

type Builder = dyn Fn(usize, f64) -> Result<QuantumChannel> + Send + Sync;

/// A one-parameter family of channels on `M_d`, parameter in `[0, 1]`.
#[derive(Clone)]
pub enum ChannelFamily {
    /// `ρ ↦ p ρ + (1 − p) I/d`.
    Depolarizing,
    /// `ρ ↦ v ρ + (1 − v) diag(ρ)`.
    Dephasing,
    /// The same channel at every parameter value (e.g. loaded from a file).
    Fixed(QuantumChannel),
    /// Any user-supplied family.
    Custom(Arc<Builder>),
}

impl ChannelFamily {
    pub fn custom(f: impl Fn(usize, f64) -> Result<QuantumChannel> + Send + Sync + 'static) -> Self {
        ChannelFamily::Custom(Arc::new(f))
    }

    pub fn channel(&self, d: usize, param: f64) -> Result<QuantumChannel> {
        match self {
            ChannelFamily::Depolarizing => QuantumChannel::depolarizing(d, param),
            ChannelFamily::Dephasing => QuantumChannel::dephasing(d, param),
            ChannelFamily::Fixed(ch) => {
                if ch.d_in() != d || ch.d_out() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "channel acts on {}→{}, requested d = {d}",
                        ch.d_in(),
                        ch.d_out()
                    )));
                }
                Ok(ch.clone())
            }
            ChannelFamily::Custom(f) => f(d, param),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ChannelFamily::Depolarizing => "depolarizing",
            ChannelFamily::Dephasing => "dephasing",
            ChannelFamily::Fixed(_) => "fixed",
            ChannelFamily::Custom(_) => "custom",
        }
    }

    /// Whether the witness value is affine in the parameter, so a single
    /// crossing can be bisected.
    pub fn is_affine(&self) -> bool {
        matches!(self, ChannelFamily::Depolarizing | ChannelFamily::Dephasing)
    }
}

impl fmt::Debug for ChannelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelFamily::Fixed(ch) => write!(f, "Fixed({}→{})", ch.d_in(), ch.d_out()),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for ChannelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "depolarizing" => Ok(ChannelFamily::Depolarizing),
            "dephasing" => Ok(ChannelFamily::Dephasing),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert!(matches!("depolarizing".parse(), Ok(ChannelFamily::Depolarizing)));
        assert!(matches!("Dephasing".parse(), Ok(ChannelFamily::Dephasing)));
        assert_eq!(
            "amplitude-damping".parse::<ChannelFamily>().unwrap_err(),
            Error::UnknownFamily("amplitude-damping".into())
        );
    }

    #[test]
    fn fixed_family_checks_dimension() {
        let fam = ChannelFamily::Fixed(QuantumChannel::identity(3));
        assert!(fam.channel(3, 0.2).is_ok());
        assert!(fam.channel(2, 0.2).is_err());
    }
}
