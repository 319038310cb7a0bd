"""Writes the splat clouds used by the example scenes (degree-0 SH)."""
import pathlib

import numpy as np

C0 = 0.28209479177387814
HERE = pathlib.Path(__file__).resolve().parent


def lattice(n, lo, side):
    h = side / n
    g = (np.arange(n) + 0.5) * h
    x, y, z = np.meshgrid(g, g, g, indexing="ij")
    return np.stack([x.ravel(), y.ravel(), z.ravel()], axis=1) + np.asarray(lo), h


def write_ply(path, pos, rgb, scale, opacity=0.9, seed=0):
    n = len(pos)
    rng = np.random.default_rng(seed)
    cols = np.clip(rgb + rng.normal(0, 0.03, (n, 3)), 0, 1)
    names = ["x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2",
             "opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3"]
    data = np.zeros((n, len(names)), dtype="<f4")
    data[:, 0:3] = pos
    data[:, 6:9] = (cols - 0.5) / C0
    data[:, 9] = np.log(opacity / (1 - opacity))
    data[:, 10:13] = np.log(scale)
    data[:, 13] = 1.0
    header = "ply\nformat binary_little_endian 1.0\nelement vertex %d\n" % n
    header += "".join("property float %s\n" % p for p in names) + "end_header\n"
    path.write_bytes(header.encode("ascii") + data.tobytes())


def main():
    pos, h = lattice(16, (-0.125, 0.35, -0.125), 0.25)
    write_ply(HERE / "jelly_cube.ply", pos, np.array([0.9, 0.3, 0.25]), 0.6 * h)

    pos, h = lattice(18, (-0.15, 0.1, -0.15), 0.3)
    write_ply(HERE / "sand_block.ply", pos, np.array([0.85, 0.7, 0.45]), 0.6 * h, seed=1)

    pos, h = lattice(14, (-0.2, 0.3, -0.05), 0.1)
    pos[:, 0] = -0.2 + (pos[:, 0] + 0.2) * 4.0  # a 0.4 x 0.1 x 0.1 bar
    write_ply(HERE / "metal_bar.ply", pos, np.array([0.7, 0.72, 0.75]), 0.6 * h * np.array([4.0, 1.0, 1.0]), seed=2)


if __name__ == "__main__":
    main()
