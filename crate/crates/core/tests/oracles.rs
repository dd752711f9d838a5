use approx::assert_relative_eq;
use rss_entropy::distributions::{sample, STANDARD_NORMAL};
use rss_entropy::estimators::{hz, HzVariant};
use rss_entropy::smoothing::build_rss_diagonal;
use rss_entropy::{SeededStream, SortedSample};

const GRID_SEED_42: [f64; 25] = [
    0.47798123835102174, 1.3340706102318078, -0.21086668327103028, 0.4763469238088213, -0.5120906220561634,
    -0.9339784493906981, -1.0023778441376028, 0.9166635595931693, 2.1215766570790087, -0.718547372072907,
    0.031378861730367816, 1.0449801415223063, 2.032183939815892, 0.35539469758759457, 0.5732135257369085,
    -0.8301297429614192, 0.28817742026866816, -0.5208272846834417, -0.024084563007059995, -0.8026301588149745,
    -0.3800749767217917, 0.8360455356770072, -1.692483434177051, -2.976578746274003, -0.6578656508088098,
];

// recomputed outside this crate from the grid above
const DIAGONAL_SEED_42: [f64; 5] = [
    -0.884967888533736,
    -0.5120906220561634,
    -0.08557814247394452,
    0.6578627882822699,
    0.8360455356770072,
];

#[test]
fn normal_stream_is_frozen() {
    let v = sample(&STANDARD_NORMAL, 25, SeededStream::new(42, 0)).unwrap();
    assert_eq!(v, GRID_SEED_42.to_vec());
}

#[test]
fn five_by_five_diagonal_bit_for_bit() {
    let rows: Vec<Vec<f64>> = GRID_SEED_42.chunks(5).map(|c| c.to_vec()).collect();
    let d = build_rss_diagonal(&rows, 3).unwrap();
    assert_eq!(d.values(), &DIAGONAL_SEED_42);
}

#[test]
fn hz_matches_scripted_evaluation() {
    let s = SortedSample::new(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_relative_eq!(hz(&s, 2, HzVariant::EqualWeights).unwrap(), 1.7278844750058333, epsilon = 1e-10);
    assert_relative_eq!(hz(&s, 2, HzVariant::BoundaryWeights).unwrap(), 1.7270844346252165, epsilon = 1e-10);
}
