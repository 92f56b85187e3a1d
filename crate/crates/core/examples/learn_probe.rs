//! Scratch probe: does lane-keeping training take off at desk scale?

use psddpg_core::trainer::{
    evaluate, train_ps_ddpg, Algorithm, Behavior, EvalConfig, Seeds, TrainConfig,
};

fn main() {
    let mut cfg = TrainConfig::new(Behavior::Lanekeeping, Algorithm::PsDdpg, 2);
    cfg.n_episodes = 120;
    cfg.max_steps = 300;
    cfg.hp.actor_hidden = vec![32, 32];
    cfg.hp.critic_hidden = vec![32, 32];
    cfg.hp.batch_size = 32;
    cfg.hp.warmup = 500;
    cfg.hp.buffer_capacity = 50_000;
    cfg.seeds = Seeds {
        world_seed: 1,
        net_seed: 2,
        noise_seed: 3,
    };

    let t0 = std::time::Instant::now();
    let out = train_ps_ddpg(&cfg).unwrap();
    let dt = t0.elapsed().as_secs_f64();

    for m in out.metrics.iter() {
        if m.episode % 5 == 0 || m.episode + 1 == cfg.n_episodes {
            println!(
                "ep {:3}  steps {:3}  mean_prog {:8.2}  sum_r {:10.1}  coll {:.2}",
                m.episode,
                m.steps,
                m.mean_progress(),
                m.sum_reward,
                m.colliding_frac
            );
        }
    }
    println!("train time: {dt:.1}s  ({:.2} ms/agent-step)", 1000.0 * dt / out.counters.active_agent_steps as f64);

    let mut ecfg = EvalConfig::new(Behavior::Lanekeeping, 2, 3);
    ecfg.max_steps = 300;
    ecfg.hp_note();
    let report = evaluate(&out.bundles[0], &ecfg).unwrap();
    println!(
        "eval: mean progress {:.2} m, colliding {:.3}",
        report.aggregates.mean_progress_per_agent, report.aggregates.mean_colliding_frac
    );
}

trait HpNote {
    fn hp_note(&self) {}
}
impl HpNote for EvalConfig {}
