//! Roles, pickups and identifiers shared by every layer.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Citizen,
    Doctor,
    SanitationWorker,
    LawEnforcer,
}

impl Role {
    pub const ALL: [Role; 4] = [
        Role::Citizen,
        Role::Doctor,
        Role::SanitationWorker,
        Role::LawEnforcer,
    ];

    /// Doctors shoot medicine and sanitation workers shoot disinfectant;
    /// the other two roles carry no ammo.
    pub fn uses_ammo(self) -> bool {
        matches!(self, Role::Doctor | Role::SanitationWorker)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Citizen => "citizen",
            Role::Doctor => "doctor",
            Role::SanitationWorker => "sanitation_worker",
            Role::LawEnforcer => "law_enforcer",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PickupKind {
    Grocery,
    MedicineRefill,
    DisinfectantRefill,
    HealthVitamin,
    VaccinePart,
    Mask,
    Sanitizer,
}

impl PickupKind {
    pub const ALL: [PickupKind; 7] = [
        PickupKind::Grocery,
        PickupKind::MedicineRefill,
        PickupKind::DisinfectantRefill,
        PickupKind::HealthVitamin,
        PickupKind::VaccinePart,
        PickupKind::Mask,
        PickupKind::Sanitizer,
    ];

    pub fn collectible_by(self, role: Role) -> bool {
        match self {
            PickupKind::Grocery => role == Role::Citizen,
            PickupKind::MedicineRefill => role == Role::Doctor,
            PickupKind::DisinfectantRefill => role == Role::SanitationWorker,
            PickupKind::HealthVitamin
            | PickupKind::VaccinePart
            | PickupKind::Mask
            | PickupKind::Sanitizer => true,
        }
    }
}

/// Opaque player identifier. The server uses the in-room display name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlayerId(pub String);

impl PlayerId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PlayerId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PlayerId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

/// Identifier for viruses and pickups; unique within a stage.
pub type EntityId = u32;
