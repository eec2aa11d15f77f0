use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bayes::{
    affordance_network, Assignment, Network, ACTION, AFFORDANCE_VARIABLES, CONTACT, HAND_VEL,
    OBJ_HAND_VEL, OBJ_VEL, SHAPE, SIZE,
};
use crate::error::{Error, Result};

/// Generative ground truth over the affordance variables.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldModel {
    network: Network,
}

impl WorldModel {
    pub fn new(network: Network) -> Result<Self> {
        for v in AFFORDANCE_VARIABLES {
            if !network.contains(v) {
                return Err(Error::UnknownVariable(v.to_string()));
            }
        }
        if network.words().next().is_some() {
            return Err(Error::Invalid(
                "world model must not contain word nodes".into(),
            ));
        }
        Ok(WorldModel { network })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }
}

/// Lift, drop and miss probabilities of a grasp.
fn grasp_outcomes(shape: &str, size: &str) -> [f64; 3] {
    match (shape, size) {
        ("sphere", "small") => [0.7, 0.15, 0.15],
        ("sphere", "medium") => [0.6, 0.2, 0.2],
        ("sphere", _) => [0.1, 0.3, 0.6],
        ("box", "small") => [0.8, 0.1, 0.1],
        ("box", "medium") => [0.6, 0.2, 0.2],
        _ => [0.0, 0.0, 1.0],
    }
}

fn obj_vel_row(action: &str, shape: &str, size: &str) -> Vec<f64> {
    match action {
        "grasp" => {
            let [lift, drop, miss] = grasp_outcomes(shape, size);
            vec![miss, lift, drop]
        }
        "tap" => match (shape, size) {
            ("sphere", _) => vec![0.0, 0.0, 1.0],
            ("box", "big") => vec![0.4, 0.6, 0.0],
            _ => vec![0.0, 1.0, 0.0],
        },
        _ => vec![1.0, 0.0, 0.0],
    }
}

fn hand_vel_row(action: &str) -> Vec<f64> {
    if action == "grasp" {
        vec![0.0, 1.0]
    } else {
        vec![1.0, 0.0]
    }
}

fn obj_hand_vel_row(action: &str, shape: &str) -> Vec<f64> {
    match (action, shape) {
        ("grasp", _) => vec![0.7, 0.2, 0.1],
        ("tap", "sphere") => vec![0.1, 0.3, 0.6],
        ("tap", _) => vec![0.2, 0.6, 0.2],
        _ => vec![0.8, 0.2, 0.0],
    }
}

fn contact_row(action: &str, obj_vel: &str) -> Vec<f64> {
    match (action, obj_vel) {
        ("grasp", "slow") | ("tap", _) => vec![1.0, 0.0],
        _ => vec![0.0, 1.0],
    }
}

impl Default for WorldModel {
    /// Hand-authored world: grasp means a fast hand and may lift, drop or miss
    /// the object (big boxes cannot be lifted); taps roll spheres and slide
    /// boxes; touches leave objects still. Color has no effect.
    fn default() -> Self {
        let mut net = affordance_network();
        let values = |name: &str| {
            net.variable(name)
                .expect("affordance variable")
                .values()
                .to_vec()
        };
        let (actions, shapes, sizes, obj_vels) =
            (values(ACTION), values(SHAPE), values(SIZE), values(OBJ_VEL));

        let mut ov = Vec::new();
        let mut hv = Vec::new();
        let mut ohv = Vec::new();
        let mut ct = Vec::new();
        for a in &actions {
            for sh in &shapes {
                for sz in &sizes {
                    ov.push(obj_vel_row(a, sh, sz));
                    hv.push(hand_vel_row(a));
                    ohv.push(obj_hand_vel_row(a, sh));
                    for v in &obj_vels {
                        ct.push(contact_row(a, v));
                    }
                }
            }
        }
        for (name, rows) in [
            (OBJ_VEL, ov),
            (HAND_VEL, hv),
            (OBJ_HAND_VEL, ohv),
            (CONTACT, ct),
        ] {
            net.set_cpt(name, rows).expect("static world table");
        }
        WorldModel { network: net }
    }
}

fn categorical<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Ancestral sample of a full affordance state.
pub fn sample_state<R: Rng + ?Sized>(world: &WorldModel, rng: &mut R) -> Assignment {
    let net = &world.network;
    let mut state = vec![0usize; net.len()];
    for &v in net.topological_order() {
        let cpt = net.cpt(v);
        let pv: Vec<usize> = net.parent_indices(v).iter().map(|&p| state[p]).collect();
        state[v] = categorical(cpt.row(cpt.row_index(&pv)), rng);
    }
    net.variables()
        .iter()
        .zip(state)
        .map(|(var, x)| (var.name().to_string(), var.values()[x].clone()))
        .collect()
}

/// Deterministic per seed.
pub fn sample_experience(world: &WorldModel, seed: u64) -> Assignment {
    sample_state(world, &mut ChaCha8Rng::seed_from_u64(seed))
}
