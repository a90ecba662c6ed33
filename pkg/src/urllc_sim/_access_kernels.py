"""Hot kernels for slot-based access simulation.

Written in nopython-compatible numpy so the same source runs interpreted
(numpy fallback) or numba-compiled; see _accel.  All randomness enters as
pre-drawn uniform arrays, never from inside the kernels, which keeps the
two paths bit-exact and makes chunked execution order-independent.

Decode semantics of one frame (fixed point):
  (i)  a slot with 1..gamma unremoved transmissions is decodable; each
       not-yet-consumed replica of an undecoded device in such a slot gets
       its single decode chance (uniform < per_replica_success),
  (ii) with SIC, all replicas of decoded devices are removed everywhere,
  (iii) with combining, the chance is taken per device over its newly clean
       replicas this iteration, with success prob 1 - (1-p)^c.
Iterate until nothing changes.  A replica is never retried: its uniform is
consumed the first time its slot is decodable.

Latency bookkeeping: a decode's enabling slot is the latest slot in its
causal chain: max(own replica slot, enabling slots of the decodes whose
removals made that slot decodable), tracked per slot in `unlock`.
"""

from __future__ import annotations

import numpy as np

from ._accel import accelerated


def _floyd_sample(uniforms, start, frame_len, k, out, out_start):
    """Floyd's k-subset sample of [0, frame_len) using uniforms[start:start+k].

    Writes k distinct slot indices into out[out_start:out_start+k]
    (unsorted).  Uniform over k-subsets.
    """
    count = 0
    for j in range(frame_len - k, frame_len):
        t = int(uniforms[start + count] * (j + 1))
        if t > j:
            t = j
        hit = False
        for i in range(count):
            if out[out_start + i] == t:
                hit = True
                break
        if hit:
            out[out_start + count] = j
        else:
            out[out_start + count] = t
        count += 1


def _resolve(
    tx_dev,
    tx_slot,
    n_tx,
    n_devices,
    frame_len,
    mpr_gamma,
    sic_enabled,
    combining_enabled,
    p_success,
    u_tx,
    u_dev,
    decoded,
    enable_slot,
):
    """Fixed-point decode of one frame; returns the iteration count.

    decoded / enable_slot are outputs (pre-filled with False / -1); u_dev
    is indexed [attempt, device] and each device makes at most k attempts.
    """
    removed = np.zeros(n_tx, np.bool_)
    consumed = np.zeros(n_tx, np.bool_)
    live = np.zeros(frame_len, np.int64)
    unlock = np.full(frame_len, -1, np.int64)
    attempts = np.zeros(n_devices, np.int64)
    c_new = np.zeros(n_devices, np.int64)
    contrib = np.zeros(n_devices, np.int64)

    # stable counting sort by slot so replicas are visited in slot order
    order = np.empty(n_tx, np.int64)
    slot_pos = np.zeros(frame_len + 1, np.int64)
    for j in range(n_tx):
        live[tx_slot[j]] += 1
        slot_pos[tx_slot[j] + 1] += 1
    for s in range(frame_len):
        slot_pos[s + 1] += slot_pos[s]
    for j in range(n_tx):
        s = tx_slot[j]
        order[slot_pos[s]] = j
        slot_pos[s] += 1

    iterations = 0
    max_iterations = n_tx + 1
    while iterations < max_iterations:
        iterations += 1
        changed = False
        if combining_enabled:
            for d in range(n_devices):
                c_new[d] = 0
                contrib[d] = -1
            for idx in range(n_tx):
                j = order[idx]
                d = tx_dev[j]
                s = tx_slot[j]
                if removed[j] or consumed[j] or decoded[d]:
                    continue
                if live[s] <= mpr_gamma:
                    consumed[j] = True
                    c_new[d] += 1
                    cand = s if s > unlock[s] else unlock[s]
                    if cand > contrib[d]:
                        contrib[d] = cand
            for d in range(n_devices):
                if c_new[d] > 0 and not decoded[d]:
                    fail = 1.0
                    for _ in range(c_new[d]):
                        fail *= 1.0 - p_success
                    if u_dev[attempts[d], d] < 1.0 - fail:
                        decoded[d] = True
                        enable_slot[d] = contrib[d]
                        changed = True
                    attempts[d] += 1
        else:
            for idx in range(n_tx):
                j = order[idx]
                d = tx_dev[j]
                s = tx_slot[j]
                if removed[j] or consumed[j] or decoded[d]:
                    continue
                if live[s] <= mpr_gamma:
                    consumed[j] = True
                    if u_tx[j] < p_success:
                        decoded[d] = True
                        cand = s if s > unlock[s] else unlock[s]
                        enable_slot[d] = cand
                        changed = True
        if not changed:
            break
        if sic_enabled:
            for j in range(n_tx):
                d = tx_dev[j]
                if decoded[d] and not removed[j]:
                    removed[j] = True
                    live[tx_slot[j]] -= 1
                    if enable_slot[d] > unlock[tx_slot[j]]:
                        unlock[tx_slot[j]] = enable_slot[d]
    return iterations


def _run_frames(
    act_u,
    pat_u,
    tx_u,
    dev_u,
    fixed_slots,
    use_fixed,
    n_devices,
    k_replicas,
    frame_len,
    mpr_gamma,
    sic_enabled,
    combining_enabled,
    p_success,
    activation_prob,
    ev_frame,
    ev_device,
    ev_decoded,
    ev_latency,
    frame_activated,
    frame_decoded,
):
    """Simulate a chunk of frames; returns the number of activation events.

    Patterns are drawn fresh per active device (grant-free) unless
    use_fixed, in which case fixed_slots[(device, replica)] is the
    coordinated assignment.  Event rows cover every activated device.
    """
    n_frames = act_u.shape[0]
    tx_dev = np.empty(n_devices * k_replicas, np.int64)
    tx_slot = np.empty(n_devices * k_replicas, np.int64)
    active = np.empty(n_devices, np.int64)
    decoded = np.empty(n_devices, np.bool_)
    enable_slot = np.empty(n_devices, np.int64)
    n_events = 0
    for f in range(n_frames):
        n_active = 0
        for d in range(n_devices):
            if act_u[f, d] < activation_prob:
                active[n_active] = d
                n_active += 1
        n_tx = 0
        for a in range(n_active):
            d = active[a]
            if use_fixed:
                for r in range(k_replicas):
                    tx_dev[n_tx] = d
                    tx_slot[n_tx] = fixed_slots[d, r]
                    n_tx += 1
            else:
                _floyd_sample(
                    pat_u[f, d], 0, frame_len, k_replicas, tx_slot, n_tx
                )
                for r in range(k_replicas):
                    tx_dev[n_tx + r] = d
                n_tx += k_replicas
        for d in range(n_devices):
            decoded[d] = False
            enable_slot[d] = -1
        _resolve(
            tx_dev,
            tx_slot,
            n_tx,
            n_devices,
            frame_len,
            mpr_gamma,
            sic_enabled,
            combining_enabled,
            p_success,
            tx_u[f].ravel(),
            dev_u[f],
            decoded,
            enable_slot,
        )
        n_dec = 0
        for a in range(n_active):
            d = active[a]
            ev_frame[n_events] = f
            ev_device[n_events] = d
            ev_decoded[n_events] = decoded[d]
            if decoded[d]:
                ev_latency[n_events] = enable_slot[d] + 1
                n_dec += 1
            else:
                ev_latency[n_events] = -1
            n_events += 1
        frame_activated[f] = n_active
        frame_decoded[f] = n_dec
    return n_events


# Compile bottom-up so _run_frames sees compiled callees when numba is active.
floyd_sample_kernel = accelerated(_floyd_sample)
_floyd_sample = floyd_sample_kernel
resolve_kernel = accelerated(_resolve)
_resolve = resolve_kernel
run_frames_kernel = accelerated(_run_frames)
