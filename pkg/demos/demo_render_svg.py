"""
Rendering scenes and summary charts to SVG
==========================================

The renderer draws each person as a heading wedge, hulls detected or
ground-truth groups, and can also chart per-size shape statistics. Output
is plain SVG text, viewable in any browser.
"""

from pathlib import Path

from fformation import (
    SynthConfig,
    characterize_corpus,
    generate_synthetic,
    render_frame_svg,
    render_size_chart_svg,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# One synthetic scene with its planted ground-truth groups hulled.
corpus = generate_synthetic(SynthConfig(n_frames=5, n_distractors=4, seed=9))
frame = corpus.frames[0]
scene_path = out_dir / "scene.svg"
scene_path.write_text(render_frame_svg(frame), encoding="utf-8")
print(f"wrote {scene_path} ({len(frame.agents)} people, {len(frame.truth)} groups)")

# A two-panel bar chart of mean tightness and symmetry per group size.
stats = characterize_corpus(corpus.frames)
chart_path = out_dir / "sizes.svg"
chart_path.write_text(render_size_chart_svg(stats), encoding="utf-8")
print(f"wrote {chart_path} ({len(stats)} group sizes)")
