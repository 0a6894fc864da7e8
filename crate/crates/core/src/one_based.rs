//! Serde adapters that expose 0-based internal indices as 1-based in JSON,
//! matching the convention of every human-facing report.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn serialize<S: Serializer>(index: &usize, serializer: S) -> Result<S::Ok, S::Error> {
    (index + 1).serialize(serializer)
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<usize, D::Error> {
    let v = usize::deserialize(deserializer)?;
    v.checked_sub(1).ok_or_else(|| serde::de::Error::custom("indices are 1-based; got 0"))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(
        indices: &[usize],
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        indices.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<usize>, D::Error> {
        Vec::<usize>::deserialize(deserializer)?
            .into_iter()
            .map(|v| {
                v.checked_sub(1)
                    .ok_or_else(|| serde::de::Error::custom("indices are 1-based; got 0"))
            })
            .collect()
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(
        index: &Option<usize>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        index.map(|i| i + 1).serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Option<usize>, D::Error> {
        match Option::<usize>::deserialize(deserializer)? {
            None => Ok(None),
            Some(v) => v
                .checked_sub(1)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom("indices are 1-based; got 0")),
        }
    }
}
