"""
Per-operator cost breakdown
===========================

Estimate the FLOPs, latency, and energy of one text-to-video generation with
the bundled wan2.1-t2v-1.3b spec on an H100, and see which operators dominate.
"""
from vidcost import VideoJob, estimate_cost, load_hardware, load_model_spec, token_length

model = load_model_spec("wan2.1-t2v-1.3b")
hw = load_hardware("h100")
mu = 0.456

job = VideoJob(height_px=720, width_px=1280, frames=81, steps=50, cfg_passes=2)
print(f"job: {job.height_px}x{job.width_px}, {job.frames} frames, {job.steps} steps")
print(f"latent tokens per pass: {token_length(job, model.dit)}")

cost = estimate_cost(job, model, hw, mu)
print(f"\ntotal FLOPs: {cost.breakdown.total:.4e}")
print(f"latency:     {cost.latency_s:.1f} s")
print(f"energy:      {cost.energy_wh:.1f} Wh\n")

print(f"{'operator':<14}{'flops':>12}{'share':>9}")
for op, flops in cost.breakdown.per_operator().items():
    print(f"{op:<14}{flops:>12.3e}{flops / cost.breakdown.total:>9.2%}")

# Self-attention dominates at this geometry; halving resolution or frame
# count shrinks the quadratic term much faster than the linear ones.
half = VideoJob(height_px=368, width_px=640, frames=81, steps=50, cfg_passes=2)
cost_half = estimate_cost(half, model, hw, mu)
print(f"\nat 368x640 the same clip costs {cost_half.latency_s:.1f} s "
      f"({cost_half.latency_s / cost.latency_s:.1%} of the 720p latency)")
