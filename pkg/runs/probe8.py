"""Scratch probe: physics ceiling. Linear CACC law (kp*e_p + kv*e_v + acc_pred
feedforward) as the control policy, fed (tau=1) vs starved (tau=6), with and without
dead-reckoning the stale status forward; realized reward contrast by link0 regime."""
import sys
import numpy as np

sys.path.insert(0, "src")
from mtcc.config import load_config
from mtcc import orchestrator as orch
from mtcc.dynamics import DrivingStatus, status_transition
from mtcc.orchestrator import EpisodeOptions, FINAL_EVAL_BASE, PHASE_EVAL, Trainer

CFG = load_config("configs/desk.cfg")
N_LINKS = CFG.platoon.n_vehicles - 1
K = CFG.train.control_intervals
P = CFG.platoon
TAU_MAX = CFG.radio.tau_max
LIMIT = P.control_limit
TRANS = [status_transition(P, i + 1) for i in range(N_LINKS)]

base = Trainer(CFG, "runs/probe8", algo="mtcc")

def unpack(feats):
    st = np.array([feats[0] * P.gap_error_scale_m, feats[1] * P.velocity_error_scale_mps,
                   feats[2] * P.acc_limit, feats[3] * P.acc_limit])
    hist = feats[4:4 + TAU_MAX] * LIMIT
    tau = int(round(feats[4 + TAU_MAX] * TAU_MAX))
    return st, hist, tau

def pd_act(link, kp, kv, ka, reckon):
    a_mat, b_vec, c_vec = TRANS[link]
    def act(feats, sigma, rng):
        st, hist, tau = unpack(feats)
        if reckon:
            # roll the stale status forward through the blind window with own past
            # controls and a hold-last guess for the predecessor
            for j in range(tau):
                u_own = hist[TAU_MAX - tau + j]
                st = a_mat @ st + b_vec * u_own + c_vec * st[3]
        u = kp * st[0] + kv * st[1] + ka * st[3]
        return float(min(LIMIT, max(-LIMIT, u)))
    return act

rows = []
def rwd_spy(status, control, cfg, vehicle):
    rows.append((vehicle, status.gap_error, status.velocity_error, control))
    return real_rwd(status, control, cfg, vehicle)
real_rwd = orch.pc_reward
orch.pc_reward = rwd_spy

def run(idx_per_link, kp, kv, ka, reckon, episodes=12):
    saved_r = [a.act for a in base.stack.rra]
    saved_p = [a.act for a in base.stack.pc]
    for link, a in enumerate(base.stack.rra):
        a.act = (lambda idx: (lambda dense, seq, eps, rng: idx))(idx_per_link[link])
    for link, a in enumerate(base.stack.pc):
        a.act = pd_act(link, kp, kv, ka, reckon)
    out = []   # (link, var, e_p, e_v, reward)
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
                veh, e_p, e_v, u = rows[i + N_LINKS]
                r = real_rwd(DrivingStatus(e_p, e_v, rows[i + N_LINKS][2], 0.0), u, P, veh) \
                    if False else 0.0
                out.append((link, var, e_p, e_v))
    finally:
        for a, f in zip(base.stack.rra, saved_r):
            a.act = f
        for a, f in zip(base.stack.pc, saved_p):
            a.act = f
    return np.array(out)

def stats(dat, name):
    for link in (0, 1, 2):
        r = dat[dat[:, 0] == link]
        var = r[:, 1]
        q25, q75 = np.quantile(var, 0.25), np.quantile(var, 0.75)
        calm, busy = r[var <= q25], r[var >= q75]
        print("%s link%d: |e_p| calm=%.3f busy=%.3f  |e_v| calm=%.3f busy=%.3f"
              % (name, link, np.abs(calm[:, 2]).mean(), np.abs(busy[:, 2]).mean(),
                 np.abs(calm[:, 3]).mean(), np.abs(busy[:, 3]).mean()), flush=True)

for (kp, kv) in ((0.2, 0.5), (0.5, 1.0), (1.0, 2.0)):
    print("== gains kp=%.1f kv=%.1f ka=1.0 ==" % (kp, kv), flush=True)
    stats(run([4, 8, 4], kp, kv, 1.0, reckon=False), "fed  plain ")
    stats(run([0, 0, 0], kp, kv, 1.0, reckon=False), "stv  plain ")
    stats(run([0, 0, 0], kp, kv, 1.0, reckon=True), "stv  reckon")
