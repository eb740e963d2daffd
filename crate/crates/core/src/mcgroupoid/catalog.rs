//! The shipped example catalog.

use serde::{Deserialize, Serialize};

use super::{DgLie3, DgLieMorphism, GroupoidCard, SemidirectProduct, TwistSign};
use crate::error::Result;
use crate::Error;

const CATALOG_JSON: &str = include_str!("../../data/mc_catalog.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub algebra: DgLie3,
    pub expected: GroupoidCard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuasiIsoExpectation {
    Pass,
    NotQuasiIso,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIsoEntry {
    pub id: String,
    pub lhs: String,
    pub rhs: String,
    pub map: DgLieMorphism,
    pub expect: QuasiIsoExpectation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationEntry {
    pub id: String,
    pub description: String,
    pub product: SemidirectProduct,
    pub expected_mc_total: u64,
    pub expected_signs: Vec<TwistSign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
    pub quasi_isomorphisms: Vec<QuasiIsoEntry>,
    pub fibrations: Vec<FibrationEntry>,
}

impl Catalog {
    pub fn entry(&self, id: &str) -> Result<&CatalogEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::Missing(format!("no catalog entry {id:?}")))
    }

    pub fn quasi_isomorphism(&self, id: &str) -> Result<&QuasiIsoEntry> {
        self.quasi_isomorphisms
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::Missing(format!("no quasi-isomorphism {id:?}")))
    }

    pub fn fibration(&self, id: &str) -> Result<&FibrationEntry> {
        self.fibrations
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::Missing(format!("no fibration entry {id:?}")))
    }
}

/// The catalog bundled with the crate.
pub fn catalog() -> Catalog {
    serde_json::from_str(CATALOG_JSON).expect("bundled catalog parses")
}
