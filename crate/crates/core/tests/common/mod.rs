#![allow(dead_code)]

use afflang::bayes::Network;
use afflang::datagen::{build_corpus, Corpus, Lexicon, NoiseProfile, WorldModel};
use afflang::inference::SceneObject;
use afflang::structure::{train, TrainConfig};

/// Default-sized corpus (254 situations, 5 descriptions each) with its noisy twin.
pub fn corpus(seed: u64) -> Corpus {
    let lexicon = Lexicon::default();
    let profile = NoiseProfile::new(lexicon.vocabulary());
    build_corpus(
        &WorldModel::default(),
        &lexicon,
        254,
        5,
        Some(&profile),
        seed,
    )
    .unwrap()
}

pub fn clean_model(seed: u64) -> Network {
    train(&corpus(seed).clean, &TrainConfig::default()).unwrap()
}

/// The six objects used in the table-top examples.
pub fn table_scene() -> Vec<SceneObject> {
    [
        ("o1", "lightgreen", "big", "sphere"),
        ("o2", "yellow", "medium", "sphere"),
        ("o3", "darkgreen", "small", "box"),
        ("o4", "blue", "medium", "box"),
        ("o5", "blue", "big", "box"),
        ("o6", "darkgreen", "small", "sphere"),
    ]
    .iter()
    .map(|(i, c, z, s)| SceneObject::new(*i, c, z, s).unwrap())
    .collect()
}
