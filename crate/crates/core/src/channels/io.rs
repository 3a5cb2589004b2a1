//! JSON form of a channel:
//! `{"d_in": 3, "d_out": 3, "kraus": [[[re, im], ...], ...]}` with each Kraus
//! operator flattened row-major (`d_out × d_in` entries).

use serde::{Deserialize, Serialize};

use super::QuantumChannel;
use crate::linalg::{ComplexMatrix, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFile {
    pub d_in: usize,
    pub d_out: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

impl ChannelFile {
    pub fn from_channel(ch: &QuantumChannel) -> Self {
        Self {
            d_in: ch.d_in(),
            d_out: ch.d_out(),
            kraus: ch
                .kraus()
                .iter()
                .map(|k| k.as_slice().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    /// Builds the channel, requiring trace preservation.
    pub fn into_channel(self) -> Result<QuantumChannel> {
        let n = self.d_in * self.d_out;
        let kraus = self
            .kraus
            .into_iter()
            .enumerate()
            .map(|(idx, entries)| {
                if entries.len() != n {
                    return Err(Error::ChannelFormat(format!(
                        "Kraus operator {idx} has {} entries, expected {n}",
                        entries.len()
                    )));
                }
                let data = entries.into_iter().map(|[re, im]| C64::new(re, im)).collect();
                ComplexMatrix::from_vec(self.d_out, self.d_in, data)
            })
            .collect::<Result<Vec<_>>>()?;
        QuantumChannel::new(kraus)
    }
}

impl QuantumChannel {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::ChannelFormat(e.to_string()))?;
        file.into_channel()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ChannelFile::from_channel(self)).expect("channel serialization cannot fail")
    }
}
