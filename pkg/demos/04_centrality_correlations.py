"""
Depth among other centralities
==============================

Rank correlations between classic centralities and two families of depth
vectors (shortest-path depth over p, diffusion depth over t). The geodesic
depth family hangs together and closeness goes with it; diffusion depth
tells a different story.
"""
from pathlib import Path

import numpy as np

from netdepth.analysis import correlation_matrix
from netdepth.reproduce import block_summary, karate_families
from netdepth.svg import correlation_svg

vectors, sp, diff = karate_families()
cm = correlation_matrix(vectors)
b = block_summary(cm, sp, diff)
print("mean r_s within the geodesic family :", round(b["within_sp"], 3))
print("mean r_s geodesic vs diffusion      :", round(b["cross"], 3))
print("closeness vs geodesic / diffusion   :", round(b["closeness_sp"], 3),
      "/", round(b["closeness_diff"], 3))

names = list(cm.names)
i = names.index("betweenness")
print("betweenness correlates most with:",
      [names[j] for j in np.argsort(-cm.r_s[i]) if j != i][:3])

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)
(out / "karate_correlations.svg").write_text(correlation_svg(cm.names, cm.r_s, cm.significant))
