use super::{build_in, build_tn, Inequality};
use crate::error::{Error, Result};

/// A named way of turning a qubit count into an inequality.
pub trait InequalityFamily: Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn build(&self, n: usize) -> Result<Inequality>;
}

pub struct Temporal;

impl InequalityFamily for Temporal {
    fn name(&self) -> &'static str {
        "temporal"
    }

    fn description(&self) -> &'static str {
        "π-correlators over permutation covers; no compatibility assumption"
    }

    fn build(&self, n: usize) -> Result<Inequality> {
        build_tn(n)
    }
}

pub struct Noncontextual;

impl InequalityFamily for Noncontextual {
    fn name(&self) -> &'static str {
        "noncontextual"
    }

    fn description(&self) -> &'static str {
        "plain expectations; assumes operators within a term commute"
    }

    fn build(&self, n: usize) -> Result<Inequality> {
        build_in(n)
    }
}

static FAMILIES: [&dyn InequalityFamily; 2] = [&Temporal, &Noncontextual];

pub fn families() -> &'static [&'static dyn InequalityFamily] {
    &FAMILIES
}

pub fn family(name: &str) -> Result<&'static dyn InequalityFamily> {
    families()
        .iter()
        .copied()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown inequality family {name:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::Flavor;

    #[test]
    fn lookup() {
        assert_eq!(family("temporal").unwrap().build(3).unwrap().flavor(), Flavor::Temporal);
        assert_eq!(
            family("noncontextual").unwrap().build(4).unwrap().flavor(),
            Flavor::Noncontextual
        );
        assert!(family("bell").is_err());
        assert_eq!(families().len(), 2);
    }
}
