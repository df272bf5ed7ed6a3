"""Straight-line reference interpreters used as test oracles.

Plain Python lists and loops, transcribed statement by statement from the
codec pseudocode, sharing no code with the package.
"""

import math
from collections import deque


def adaptive_sampling(s, sampling_threshold):
    count = [0] * (len(s) - 1)
    for t in range(0, len(s) - 1):
        count[t] = math.ceil(abs((s[t + 1] - s[t]) / sampling_threshold))
    s_a = [0.0] * (sum(count) + 1)
    n = 0
    for i in range(0, len(s) - 1):
        for j in range(0, count[i]):
            s_a[n] = s[i] + (j) / count[i] * (s[i + 1] - s[i])
            n += 1
    s_a[len(s_a) - 1] = s[len(s) - 1]
    return s_a, count


def sf_encoding(s, threshold):
    startpoint = s[0]
    out = [0] * len(s)
    base = s[0]
    for t in range(1, len(s)):
        if s[t] > base + threshold:
            out[t] = 1
            base = base + threshold
        elif s[t] < base - threshold:
            out[t] = -1
            base = base - threshold
    return out, startpoint


def tbr_encoding(s, threshold):
    # second comparison uses diff < -threshold (silent on small changes)
    startpoint = s[0]
    diff = [0.0] * len(s)
    for t in range(0, len(s) - 1):
        diff[t] = s[t + 1] - s[t]
    diff[len(s) - 1] = diff[len(s) - 2]
    out = [0] * len(s)
    for t in range(0, len(s)):
        if diff[t] > threshold:
            out[t] = 1
        elif diff[t] < -threshold:
            out[t] = -1
    return out, startpoint


def temporal_decoding(spikes, threshold, startpoint):
    recon = [0.0] * len(spikes)
    recon[0] = startpoint
    for t in range(1, len(spikes)):
        if spikes[t] == 1:
            recon[t] = recon[t - 1] + threshold
        elif spikes[t] == -1:
            recon[t] = recon[t - 1] - threshold
        else:
            recon[t] = recon[t - 1]
    return recon


def adaptive_decoding(spikes, threshold, startpoint, count):
    recon_a = temporal_decoding(spikes, threshold, startpoint)
    m = 0
    recon = [0.0] * (len(count) + 1)
    for t in range(0, len(count)):
        recon[t] = recon_a[m]
        m += count[t]
    recon[len(recon) - 1] = recon_a[len(recon_a) - 1]
    return recon


def run_codec(s, method, adaptive, sampling_threshold, encoding_threshold):
    """Full encode/decode: returns (spikes, reconstruction on the original grid)."""
    s = list(s)
    count = None
    if adaptive:
        s, count = adaptive_sampling(s, sampling_threshold)
    if method == "sf":
        out, start = sf_encoding(s, encoding_threshold)
    else:
        out, start = tbr_encoding(s, encoding_threshold)
    if adaptive:
        recon = adaptive_decoding(out, encoding_threshold, start, count)
    else:
        recon = temporal_decoding(out, encoding_threshold, start)
    return out, recon


def correlate2d_replicate(img, kernel):
    """Direct 2D correlation with edge replication."""
    h, w = len(img), len(img[0])
    kh, kw = len(kernel), len(kernel[0])
    ry, rx = kh // 2, kw // 2
    out = [[0.0] * w for _ in range(h)]
    for r in range(h):
        for c in range(w):
            acc = 0.0
            for i in range(kh):
                for j in range(kw):
                    rr = min(max(r + i - ry, 0), h - 1)
                    cc = min(max(c + j - rx, 0), w - 1)
                    acc += kernel[i][j] * img[rr][cc]
            out[r][c] = acc
    return out


def nms_reference(magnitude, direction):
    """Per-pixel comparison against the two neighbours along the gradient."""
    h, w = len(magnitude), len(magnitude[0])
    out = [[0.0] * w for _ in range(h)]
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            deg = math.degrees(direction[r][c]) % 180.0
            if deg < 22.5 or deg >= 157.5:
                n1, n2 = (r, c - 1), (r, c + 1)
            elif deg < 67.5:
                n1, n2 = (r - 1, c - 1), (r + 1, c + 1)
            elif deg < 112.5:
                n1, n2 = (r - 1, c), (r + 1, c)
            else:
                n1, n2 = (r - 1, c + 1), (r + 1, c - 1)
            m = magnitude[r][c]
            if m >= magnitude[n1[0]][n1[1]] and m >= magnitude[n2[0]][n2[1]]:
                out[r][c] = m
    return out


def flood_fill_hysteresis(img, low, high):
    h, w = len(img), len(img[0])
    mask = [[False] * w for _ in range(h)]
    queue = deque()
    for r in range(h):
        for c in range(w):
            if img[r][c] >= high:
                mask[r][c] = True
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                rr, cc = r + dr, c + dc
                if 0 <= rr < h and 0 <= cc < w and not mask[rr][cc] and img[rr][cc] >= low:
                    mask[rr][cc] = True
                    queue.append((rr, cc))
    return mask
