use serde::ser::{Serialize, SerializeMap, Serializer};

/// Named non-negative residuals in a fixed, reproducible order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Residuals {
    entries: Vec<(String, f64)>,
}

impl Residuals {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, id: impl Into<String>, value: f64) {
        self.entries.push((id.into(), value));
    }

    pub fn extend(&mut self, other: Residuals) {
        self.entries.extend(other.entries);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn get(&self, id: &str) -> Option<f64> {
        self.iter().find(|(k, _)| *k == id).map(|(_, v)| v)
    }

    /// Largest value, 0 when empty. NaN counts as infinitely bad.
    pub fn max(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, v)| if v.is_nan() { f64::INFINITY } else { *v })
            .fold(0.0, f64::max)
    }

    /// Entries strictly above `tol` (or NaN).
    pub fn exceeding(&self, tol: f64) -> impl Iterator<Item = (&str, f64)> {
        self.iter().filter(move |(_, v)| v.is_nan() || *v > tol)
    }

    /// Only the entries whose id starts with `prefix`.
    pub fn with_prefix(&self, prefix: &str) -> Residuals {
        Residuals {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.starts_with(prefix))
                .cloned()
                .collect(),
        }
    }
}

impl FromIterator<(String, f64)> for Residuals {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        Residuals {
            entries: iter.into_iter().collect(),
        }
    }
}

impl Serialize for Residuals {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}
