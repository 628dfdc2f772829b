//! Degrees of freedom and photon modes.
//!
//! A [`DofSchema`] is an ordered list of named degrees of freedom, each with a
//! finite ordered alphabet of labels. A [`Mode`] picks one label per DOF and is
//! stored as the vector of label indices, so modes order lexicographically by
//! (DOF position, label index).

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Conventional DOF names used by the builders and the optics module.
pub const SPATIAL: &str = "spatial";
pub const POLARIZATION: &str = "pol";
pub const FREQUENCY: &str = "freq";

/// Index of `H` and `V` inside a polarization alphabet.
pub const H: u16 = 0;
pub const V: u16 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dof {
    pub name: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DofSchema {
    dofs: Vec<Dof>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '+' | '\''))
}

impl DofSchema {
    pub fn new<N, L, I>(dofs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (N, Vec<L>)>,
        N: Into<String>,
        L: Into<String>,
    {
        let dofs: Vec<Dof> = dofs
            .into_iter()
            .map(|(name, labels)| Dof {
                name: name.into(),
                labels: labels.into_iter().map(Into::into).collect(),
            })
            .collect();
        if dofs.is_empty() {
            return Err(Error::schema("schema needs at least one DOF"));
        }
        for (i, dof) in dofs.iter().enumerate() {
            if !is_identifier(&dof.name) {
                return Err(Error::schema(format!("bad DOF name {:?}", dof.name)));
            }
            if dofs[..i].iter().any(|d| d.name == dof.name) {
                return Err(Error::schema(format!("duplicate DOF {:?}", dof.name)));
            }
            if dof.labels.is_empty() {
                return Err(Error::schema(format!("DOF {:?} has an empty alphabet", dof.name)));
            }
            if dof.labels.len() > u16::MAX as usize {
                return Err(Error::schema(format!("DOF {:?} alphabet too large", dof.name)));
            }
            for (j, label) in dof.labels.iter().enumerate() {
                if !is_identifier(label) {
                    return Err(Error::schema(format!("bad label {label:?} in DOF {:?}", dof.name)));
                }
                if dof.labels[..j].contains(label) {
                    return Err(Error::schema(format!(
                        "duplicate label {label:?} in DOF {:?}",
                        dof.name
                    )));
                }
            }
        }
        Ok(DofSchema { dofs })
    }

    pub fn dofs(&self) -> &[Dof] {
        &self.dofs
    }

    pub fn len(&self) -> usize {
        self.dofs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dofs.is_empty()
    }

    pub fn dof_index(&self, name: &str) -> Option<usize> {
        self.dofs.iter().position(|d| d.name == name)
    }

    pub fn require_dof(&self, name: &str) -> Result<usize> {
        self.dof_index(name)
            .ok_or_else(|| Error::schema(format!("schema has no DOF named {name:?}")))
    }

    pub fn label_index(&self, dof: usize, label: &str) -> Option<u16> {
        self.dofs[dof].labels.iter().position(|l| l == label).map(|i| i as u16)
    }

    pub fn label(&self, dof: usize, index: u16) -> &str {
        &self.dofs[dof].labels[index as usize]
    }

    /// Number of modes in the full product space.
    pub fn mode_count(&self) -> usize {
        self.dofs.iter().map(|d| d.labels.len()).product()
    }

    /// Build a mode from one label per DOF, in schema order.
    pub fn mode(&self, labels: &[&str]) -> Result<Mode> {
        if labels.len() != self.dofs.len() {
            return Err(Error::schema(format!(
                "mode needs {} labels, got {}",
                self.dofs.len(),
                labels.len()
            )));
        }
        labels
            .iter()
            .enumerate()
            .map(|(d, l)| {
                self.label_index(d, l).ok_or_else(|| {
                    Error::schema(format!("label {l:?} not in DOF {:?}", self.dofs[d].name))
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Mode)
    }

    /// Build a mode from raw label indices, checking ranges.
    pub fn mode_from_indices(&self, indices: Vec<u16>) -> Result<Mode> {
        if indices.len() != self.dofs.len() {
            return Err(Error::schema("mode arity does not match schema"));
        }
        for (d, &i) in indices.iter().enumerate() {
            if i as usize >= self.dofs[d].labels.len() {
                return Err(Error::schema(format!(
                    "label index {i} out of range for DOF {:?}",
                    self.dofs[d].name
                )));
            }
        }
        Ok(Mode(indices))
    }

    pub fn contains(&self, mode: &Mode) -> bool {
        mode.0.len() == self.dofs.len()
            && mode
                .0
                .iter()
                .zip(&self.dofs)
                .all(|(&i, d)| (i as usize) < d.labels.len())
    }

    /// A copy of this schema where DOF `dof` has at least `count` labels;
    /// missing labels are generated as `<prefix><index>`.
    pub fn with_min_labels(&self, dof: usize, count: usize, prefix: &str) -> Result<DofSchema> {
        let mut dofs = self.dofs.clone();
        let labels = &mut dofs[dof].labels;
        let mut next = labels.len();
        while labels.len() < count {
            let candidate = format!("{prefix}{next}");
            next += 1;
            if !labels.contains(&candidate) {
                labels.push(candidate);
            }
        }
        DofSchema::new(dofs.into_iter().map(|d| (d.name, d.labels)))
    }

    /// Check that the schema has a two-label polarization DOF `[H, V]`.
    pub fn require_polarization(&self) -> Result<usize> {
        let p = self.require_dof(POLARIZATION)?;
        let labels = &self.dofs[p].labels;
        if labels.len() != 2 || labels[0] != "H" || labels[1] != "V" {
            return Err(Error::schema(format!(
                "polarization alphabet must be [H, V], found {labels:?}"
            )));
        }
        Ok(p)
    }

    pub fn display_mode(&self, mode: &Mode) -> String {
        let parts: Vec<&str> = mode
            .0
            .iter()
            .enumerate()
            .map(|(d, &i)| self.label(d, i))
            .collect();
        format!("[{}]", parts.join(","))
    }

    pub fn display_tuple(&self, tuple: &[Mode]) -> String {
        let parts: Vec<String> = tuple.iter().map(|m| self.display_mode(m)).collect();
        format!("({})", parts.join(" "))
    }
}

impl fmt::Display for DofSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.dofs.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}={{{}}}", d.name, d.labels.join(","))?;
        }
        Ok(())
    }
}

/// One label index per DOF, in schema order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode(pub Vec<u16>);

impl Mode {
    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, dof: usize) -> u16 {
        self.0[dof]
    }

    pub fn with(&self, dof: usize, label: u16) -> Mode {
        let mut m = self.0.clone();
        m[dof] = label;
        Mode(m)
    }

    /// Labels of the selected DOFs, in the order given.
    pub fn project(&self, dofs: &[usize]) -> Vec<u16> {
        dofs.iter().map(|&d| self.0[d]).collect()
    }
}

pub type SchemaRef = Arc<DofSchema>;

/// Spatial `[S]` × polarization `[H, V]`.
pub fn single_mode_schema() -> SchemaRef {
    Arc::new(DofSchema::new([(SPATIAL, vec!["S"]), (POLARIZATION, vec!["H", "V"])]).unwrap())
}

/// Spatial `[S1..Sn]` × polarization `[H, V]`.
pub fn multi_arm_schema(n: usize) -> Result<SchemaRef> {
    if n == 0 {
        return Err(Error::schema("need at least one spatial mode"));
    }
    let arms: Vec<String> = (1..=n).map(|i| format!("S{i}")).collect();
    Ok(Arc::new(DofSchema::new([
        (SPATIAL.to_string(), arms),
        (POLARIZATION.to_string(), vec!["H".into(), "V".into()]),
    ])?))
}

/// Spatial `[S]` × polarization `[H, V]` × the given frequency alphabet.
pub fn single_mode_frequency_schema(freqs: &[String]) -> Result<SchemaRef> {
    Ok(Arc::new(DofSchema::new([
        (SPATIAL.to_string(), vec!["S".to_string()]),
        (POLARIZATION.to_string(), vec!["H".into(), "V".into()]),
        (FREQUENCY.to_string(), freqs.to_vec()),
    ])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty_alphabets() {
        assert!(DofSchema::new([("a", vec!["x"]), ("a", vec!["y"])]).is_err());
        assert!(DofSchema::new([("a", vec!["x", "x"])]).is_err());
        assert!(DofSchema::new([("a", Vec::<&str>::new())]).is_err());
        assert!(DofSchema::new([("a b", vec!["x"])]).is_err());
    }

    #[test]
    fn modes_order_by_dof_then_label() {
        let s = DofSchema::new([("spatial", vec!["S2", "S1"]), ("pol", vec!["H", "V"])]).unwrap();
        let a = s.mode(&["S2", "V"]).unwrap();
        let b = s.mode(&["S1", "H"]).unwrap();
        // S2 comes first in the alphabet, so it sorts first regardless of name.
        assert!(a < b);
        assert_eq!(s.display_mode(&a), "[S2,V]");
        assert!(s.mode(&["S3", "H"]).is_err());
    }

    #[test]
    fn extends_alphabet() {
        let s = single_mode_schema();
        let t = s.with_min_labels(0, 3, "arm").unwrap();
        assert_eq!(t.dofs()[0].labels, vec!["S", "arm1", "arm2"]);
    }
}
