//! The eight symbolic affordance variables and the default network structure.

use crate::bayes::{Network, ParentMap, VarKind, Variable};

pub const ACTION: &str = "Action";
pub const COLOR: &str = "Color";
pub const SHAPE: &str = "Shape";
pub const SIZE: &str = "Size";
pub const OBJ_VEL: &str = "ObjVel";
pub const HAND_VEL: &str = "HandVel";
pub const OBJ_HAND_VEL: &str = "ObjHandVel";
pub const CONTACT: &str = "Contact";

/// Affordance variables in canonical order (actions, features, effects).
pub const AFFORDANCE_VARIABLES: [&str; 8] = [
    ACTION,
    COLOR,
    SHAPE,
    SIZE,
    OBJ_VEL,
    HAND_VEL,
    OBJ_HAND_VEL,
    CONTACT,
];

/// Object features in the order used by scene and corpus files.
pub const FEATURES: [&str; 3] = [COLOR, SIZE, SHAPE];

pub const EFFECTS: [&str; 4] = [OBJ_VEL, HAND_VEL, OBJ_HAND_VEL, CONTACT];

pub fn is_affordance_variable(name: &str) -> bool {
    AFFORDANCE_VARIABLES.contains(&name)
}

pub fn affordance_variables() -> Vec<Variable> {
    let spec: [(&str, &[&str], VarKind); 8] = [
        (ACTION, &["grasp", "tap", "touch"], VarKind::Action),
        (
            COLOR,
            &["lightgreen", "darkgreen", "yellow", "blue"],
            VarKind::Feature,
        ),
        (SHAPE, &["sphere", "box"], VarKind::Feature),
        (SIZE, &["small", "medium", "big"], VarKind::Feature),
        (OBJ_VEL, &["slow", "medium", "fast"], VarKind::Effect),
        (HAND_VEL, &["slow", "fast"], VarKind::Effect),
        (OBJ_HAND_VEL, &["slow", "medium", "fast"], VarKind::Effect),
        (CONTACT, &["short", "long"], VarKind::Effect),
    ];
    spec.iter()
        .map(|(n, vals, k)| Variable::new(*n, vals.iter().copied(), *k).expect("static table"))
        .collect()
}

/// Action, Shape and Size feed every effect; Contact additionally depends on
/// ObjVel so that the joint outcome of a grasp is representable. Color has no
/// links.
pub fn default_affordance_parents() -> ParentMap {
    let base = || vec![ACTION.to_string(), SHAPE.to_string(), SIZE.to_string()];
    let mut map = ParentMap::new();
    for e in [OBJ_VEL, HAND_VEL, OBJ_HAND_VEL] {
        map.insert(e.to_string(), base());
    }
    let mut contact = base();
    contact.push(OBJ_VEL.to_string());
    map.insert(CONTACT.to_string(), contact);
    map
}

/// Default affordance network with uniform placeholder CPTs.
pub fn affordance_network() -> Network {
    Network::new(affordance_variables(), &default_affordance_parents()).expect("static structure")
}
