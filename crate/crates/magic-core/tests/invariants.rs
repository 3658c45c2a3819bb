//! Cross-module property checks that tie the optimization routes
//! together (projection vs robustness, doped dictionaries vs the
//! net-extended robustness, channel classification vs direct simulation).

use magic_core::channel::{classify_cspc, classify_ctdspc, t_gate_channel, QuantumChannel};
use magic_core::clifford::clifford_group;
use magic_core::doped::{build_doped_dictionary, decide_doped_membership, DopedDictionary};
use magic_core::membership::{project_onto_polytope, Decision, Dictionary};
use magic_core::monotones::{robustness_of_magic, t_extended_robustness};
use magic_core::operator::DensityMatrix;
use magic_core::sampling::{ginibre_density, pure_state, rng_for, t_state_amplitudes, tensor};
use magic_core::stabilizer::enumerate_stabilizer_states;
use magic_core::Cpx;
use rand::prelude::*;

#[test]
fn projection_agrees_with_robustness_on_membership() {
    // distance = 0 <=> robustness <= 1 + 1e-6, on random states
    let mut rng = rng_for(0xD1CE, 0);
    for n in 1..=2usize {
        let dict = Dictionary::<f64>::stabilizer(n).unwrap();
        for _ in 0..250 {
            let rho = ginibre_density::<f64>(1 << n, &mut rng);
            let v = project_onto_polytope(&rho, &dict).unwrap();
            let r = robustness_of_magic(&rho).unwrap().value;
            let inside_by_distance = v.distance <= 1e-6;
            let inside_by_robustness = r <= 1.0 + 1e-6;
            assert_eq!(
                inside_by_distance, inside_by_robustness,
                "distance {} vs robustness {r}",
                v.distance
            );
        }
    }
}

#[test]
fn projection_of_exterior_point_is_a_free_state() {
    let dict = Dictionary::<f64>::stabilizer(1).unwrap();
    let rho = pure_state(&t_state_amplitudes::<f64>());
    let v = project_onto_polytope(&rho, &dict).unwrap();
    let r = robustness_of_magic(&v.projection).unwrap().value;
    assert!((r - 1.0).abs() <= 1e-6, "projection robustness {r}");
}

#[test]
fn t_extended_robustness_at_t0_is_robustness() {
    let mut rng = rng_for(0xD1CE, 1);
    let dict = build_doped_dictionary::<f64>(1, 0, 0.5, &[], &mut rng).unwrap();
    for _ in 0..5 {
        let rho = ginibre_density::<f64>(2, &mut rng);
        let plain = robustness_of_magic(&rho).unwrap().value;
        let extended = t_extended_robustness(&rho, &dict).unwrap().value;
        assert!((plain - extended).abs() <= 1e-7, "{plain} vs {extended}");
    }
}

#[test]
fn t_extended_robustness_is_one_on_net_members() {
    let mut rng = rng_for(0xD1CE, 2);
    // a net that contains |T>: the T state itself is 1-doped
    let dict =
        build_doped_dictionary::<f64>(1, 1, 0.5, &[t_state_amplitudes::<f64>()], &mut rng)
            .unwrap();
    let t = pure_state(&t_state_amplitudes::<f64>());
    let cert = t_extended_robustness(&t, &dict).unwrap();
    assert!((cert.value - 1.0).abs() <= 1e-6, "R_net(T) = {}", cert.value);
}

#[test]
fn tt_has_extended_robustness_above_one() {
    let mut rng = rng_for(0xD1CE, 3);
    let dict =
        build_doped_dictionary::<f64>(2, 1, 0.5, &[t_state_amplitudes::<f64>()], &mut rng)
            .unwrap();
    let tt = pure_state(&tensor(
        &t_state_amplitudes::<f64>(),
        &t_state_amplitudes::<f64>(),
    ));
    let cert = t_extended_robustness(&tt, &dict).unwrap();
    assert!(cert.value > 1.0 + 1e-6, "R_net(TT) = {}", cert.value);
    // consistent with the projection route
    let verdict = decide_doped_membership(&tt, &dict, 1e-4).unwrap();
    assert_eq!(verdict.verdict.decision, Some(Decision::No));
}

#[test]
fn rank_deficient_net_is_reported() {
    // a dictionary too small to span operator space
    let mut members: Vec<Vec<Cpx>> = Vec::new();
    members.push(vec![Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)]);
    members.push(vec![Cpx::new(0.0, 0.0), Cpx::new(1.0, 0.0)]);
    let dict = DopedDictionary {
        n_qubits: 1,
        t: 1,
        net_eps: 0.5,
        members,
        net_seeds: vec![],
        net_covering: 0.5,
    };
    let rho = DensityMatrix::<f64>::maximally_mixed(1);
    assert!(matches!(
        t_extended_robustness(&rho, &dict),
        Err(magic_core::Error::RankDeficientDictionary { .. })
    ));
}

#[test]
fn doped_dictionary_nesting() {
    // dict(t) lies inside hull(dict(t+1)) when the finer net extends the
    // coarser one; checked on sampled members at n = 2
    let mut rng = rng_for(0xD1CE, 4);
    let dict1 = build_doped_dictionary::<f64>(2, 1, 0.6, &[], &mut rng).unwrap();
    // pad the level-1 seeds to two qubits and seed the level-2 net with them
    let zero = [Cpx::new(1.0, 0.0), Cpx::new(0.0, 0.0)];
    let padded: Vec<Vec<Cpx>> = dict1
        .net_seeds
        .iter()
        .map(|s| tensor(s, &zero))
        .collect();
    let dict2 = build_doped_dictionary::<f64>(2, 2, 0.6, &padded, &mut rng).unwrap();
    let members: Vec<&Vec<Cpx>> = dict1
        .members
        .iter()
        .step_by((dict1.members.len() / 100).max(1))
        .collect();
    for m in members {
        let rho = pure_state(m);
        let v = decide_doped_membership(&rho, &dict2, 1e-4).unwrap();
        assert_eq!(
            v.verdict.decision,
            Some(Decision::Yes),
            "level-1 member must stay inside the level-2 hull"
        );
    }
    // and the stabilizer set sits inside the level-1 hull
    let states = enumerate_stabilizer_states::<f64>(2).unwrap();
    for st in states.iter().step_by(17) {
        let v = decide_doped_membership(&st.to_density(), &dict1, 1e-4).unwrap();
        assert_eq!(v.verdict.decision, Some(Decision::Yes));
    }
}

#[test]
fn ctdspc_t_channel_with_seeded_net_is_yes() {
    let mut rng = rng_for(0xD1CE, 5);
    // Choi seed of the T channel is the T state on the doped qubit
    let dict =
        build_doped_dictionary::<f64>(2, 1, 0.5, &[t_state_amplitudes::<f64>()], &mut rng)
            .unwrap();
    let r = classify_ctdspc(&t_gate_channel::<f64>(), &dict, 1e-4).unwrap();
    assert_eq!(r.decision, Decision::Yes);
}

#[test]
fn ctdspc_clifford_channel_t0_is_yes() {
    let mut rng = rng_for(0xD1CE, 6);
    let dict = build_doped_dictionary::<f64>(2, 0, 0.5, &[], &mut rng).unwrap();
    let group = clifford_group::<f64>(1).unwrap();
    for u in group.iter().step_by(5) {
        let channel = QuantumChannel::unitary(1, u.clone()).unwrap();
        let r = classify_ctdspc(&channel, &dict, 1e-4).unwrap();
        assert_eq!(r.decision, Decision::Yes);
    }
}

#[test]
fn cspc_invariant_under_clifford_composition() {
    // pre/post-composing with Cliffords never flips a YES
    let mut rng = rng_for(0xD1CE, 7);
    let group = clifford_group::<f64>(1).unwrap();
    let z = magic_core::pauli::PauliString::parse("Z").unwrap().dense::<f64>();
    let s = 1.0 / 2f64.sqrt();
    let dephasing = QuantumChannel::new(
        1,
        vec![
            magic_core::operator::Matrix::identity(2).scale(s),
            z.scale(s),
        ],
    )
    .unwrap();
    let identity = QuantumChannel::unitary(1, magic_core::operator::Matrix::identity(2)).unwrap();
    for base in [&identity, &dephasing] {
        for _ in 0..25 {
            let pre = group.choose(&mut rng).unwrap();
            let post = group.choose(&mut rng).unwrap();
            let kraus: Vec<_> = base
                .kraus()
                .iter()
                .map(|k| post.matmul(k).matmul(pre))
                .collect();
            let composed = QuantumChannel::new(1, kraus).unwrap();
            let r = classify_cspc(&composed, 0.05).unwrap();
            assert_eq!(r.decision, Decision::Yes);
        }
    }
}
