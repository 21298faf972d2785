"""Scratch probe: delay-aware linear prior design sweep. Arms: fed (forced maxpow) vs
starved (forced silent) with dead-reckoned PD control; factors: headway, gains,
tau-scheduled gain cooling. Scores mean pc_reward by link0-regime buckets."""
import sys
import numpy as np

sys.path.insert(0, "src")
from mtcc.config import load_config
from mtcc import orchestrator as orch
from mtcc.dynamics import status_transition
from mtcc.orchestrator import EpisodeOptions, FINAL_EVAL_BASE, Trainer

BASE = load_config("configs/desk.cfg")
N_LINKS = BASE.platoon.n_vehicles - 1
K = BASE.train.control_intervals
TAU_MAX = BASE.radio.tau_max

rows = []
real_rwd = orch.pc_reward
def rwd_spy(status, control, cfg, vehicle):
    v = real_rwd(status, control, cfg, vehicle)
    rows.append(v)
    return v
orch.pc_reward = rwd_spy

def pd_act(link, P, kp, kv, schedule, reckon):
    trans = status_transition(P, link + 1)
    limit = P.control_limit
    def act(feats, sigma, rng):
        st = np.array([feats[0] * P.gap_error_scale_m,
                       feats[1] * P.velocity_error_scale_mps,
                       feats[2] * P.acc_limit, feats[3] * P.acc_limit])
        hist = feats[4:4 + TAU_MAX] * limit
        tau = int(round(feats[4 + TAU_MAX] * TAU_MAX))
        if reckon:
            a_mat, b_vec, c_vec = trans
            for j in range(tau):
                st = a_mat @ st + b_vec * hist[TAU_MAX - tau + j] + c_vec * st[3]
        g = 1.0 / (1.0 + 0.2 * (tau - 1)) if schedule else 1.0
        u = g * kp * st[0] + g * kv * st[1] + st[3]
        return float(min(limit, max(-limit, u)))
    return act

def run_arm(cfg, trainer, idx_per_link, kp, kv, schedule, reckon, episodes=12):
    for link, a in enumerate(trainer.stack.rra):
        a.act = (lambda idx: (lambda dense, seq, eps, rng: idx))(idx_per_link[link])
    for link, a in enumerate(trainer.stack.pc):
        a.act = pd_act(link, cfg.platoon, kp, kv, schedule, reckon)
    out = []   # (link, var, reward)
    for j in range(episodes):
        rows.clear()
        opts = EpisodeOptions(actor="pc")
        res = orch.run_episode(cfg, trainer.algo, trainer.stack, FINAL_EVAL_BASE + j,
                               opts, trainer.leader, trainer.sampler)
        for i, (var, tau) in enumerate(res.var_tau_pairs):
            k, link = 1 + i // N_LINKS, i % N_LINKS
            if k >= K:
                continue
            out.append((link, var, rows[i + N_LINKS]))
    return np.array(out)

def buckets(dat, link=0):
    r = dat[dat[:, 0] == link]
    var = r[:, 1]
    q25, q75 = np.quantile(var, 0.25), np.quantile(var, 0.75)
    return r[var <= q25, 2].mean(), r[var >= q75, 2].mean()

for h in (1.0, 0.5):
    for (kp, kv) in ((0.2, 0.6), (0.4, 1.0)):
        for schedule in (False, True):
            cfg = BASE.with_overrides(time_headway_s=h)
            tr = Trainer(cfg, "runs/probe9", algo="mtcc")
            fed = run_arm(cfg, tr, [4, 8, 4], kp, kv, schedule, reckon=True)
            stv = run_arm(cfg, tr, [0, 0, 0], kp, kv, schedule, reckon=True)
            fc, fb = buckets(fed)
            sc, sb = buckets(stv)
            dl, dh = fc - sc, fb - sb
            pooled_f = fed[:, 2].mean()
            pooled_s = stv[:, 2].mean()
            print("h=%.1f kp=%.1f kv=%.1f sched=%d | fed calm/busy=%.3f/%.3f "
                  "stv=%.3f/%.3f | D calm=%.3f busy=%.3f (%.1fx) | pooled f/s=%.3f/%.3f"
                  % (h, kp, kv, schedule, fc, fb, sc, sb, dl, dh,
                     dh / max(dl, 1e-9), pooled_f, pooled_s), flush=True)
