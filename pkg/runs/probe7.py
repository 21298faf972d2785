"""Scratch probe: per-term reward breakdown of the trained pc stack at forced tau=1
vs tau=6, split by leader regime (link0 calm/busy windows)."""
import sys
import numpy as np

sys.path.insert(0, "src")
from mtcc.config import load_config
from mtcc import orchestrator as orch
from mtcc.orchestrator import EpisodeOptions, FINAL_EVAL_BASE, PHASE_EVAL, Trainer, load_pc_into

CFG = load_config("configs/desk.cfg").with_overrides(pc_train_steps=6)
N_LINKS = CFG.platoon.n_vehicles - 1
K = CFG.train.control_intervals
P = CFG.platoon

base = Trainer(CFG, "runs/probe7", algo="mtcc")
load_pc_into(base.stack, "runs/probe6/step1/ckpt")

rows = []
def rwd_spy(status, control, cfg, vehicle):
    tau_v = cfg.drive_time_constants_s[vehicle]
    jerk = (control - status.acc_self) / tau_v
    rows.append((vehicle, status.gap_error, status.velocity_error, status.acc_self,
                 status.acc_pred, control, jerk))
    return real_rwd(status, control, cfg, vehicle)
real_rwd = orch.pc_reward
orch.pc_reward = rwd_spy

def forced(idx_per_link, episodes=20):
    saved = [a.act for a in base.stack.rra]
    for link, a in enumerate(base.stack.rra):
        a.act = (lambda idx: (lambda dense, seq, eps, rng: idx))(idx_per_link[link])
    out = []   # (link, k, window_var, e_p, e_v, u, jerk)
    try:
        for j in range(episodes):
            rows.clear()
            opts = EpisodeOptions(phase=PHASE_EVAL, iteration=0, actor="pc")
            res = orch.run_episode(CFG, base.algo, base.stack, FINAL_EVAL_BASE + j, opts,
                                   base.leader, base.sampler)
            for i, (var, tau) in enumerate(res.var_tau_pairs):
                k, link = 1 + i // N_LINKS, i % N_LINKS
                if k >= K:
                    continue
                veh, e_p, e_v, acc, accp, u, jerk = rows[i + N_LINKS]
                assert veh == link + 1
                out.append((link, k, var, e_p, e_v, u, jerk))
    finally:
        for a, f in zip(base.stack.rra, saved):
            a.act = f
    return np.array(out)

def report(dat, name):
    for link in range(N_LINKS):
        r = dat[dat[:, 0] == link]
        var = r[:, 2]
        q25, q75 = np.quantile(var, 0.25), np.quantile(var, 0.75)
        for label, mask in (("calm", var <= q25), ("busy", var >= q75)):
            s = r[mask]
            cost_p = np.mean(np.abs(s[:, 3])) / P.gap_error_scale_m
            cost_v = P.weight_velocity_error * np.mean(np.abs(s[:, 4])) / P.velocity_error_scale_mps
            cost_u = P.weight_control_effort * np.mean(np.abs(s[:, 5])) / P.control_limit
            cost_j = P.weight_jerk * np.mean(np.abs(s[:, 6])) / (2 * P.acc_limit / P.control_period_s)
            print("%s link%d %s: |e_p|=%.3f |e_v|=%.3f |u|=%.3f cost p/v/u/j ="
                  " %.3f/%.3f/%.3f/%.3f  total=%.3f"
                  % (name, link, label, np.mean(np.abs(s[:, 3])), np.mean(np.abs(s[:, 4])),
                     np.mean(np.abs(s[:, 5])), cost_p, cost_v, cost_u, cost_j,
                     cost_p + cost_v + cost_u + cost_j), flush=True)

dat_s = forced([0, 0, 0])
dat_m = forced([4, 8, 4])
report(dat_s, "starved")
report(dat_m, "fed    ")
