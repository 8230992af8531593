#!/usr/bin/env python3
"""Writes the bundled scenario files under scenarios/."""

import pathlib
import random

OUT = pathlib.Path(__file__).resolve().parents[2] / "scenarios"


def beacon_id(n):
    return f"00000000-0000-0000-0000-{n:012x}"


def rect(label, x0, y0, x1, y1, floor=0):
    return (f"    - {{label: {label}, floor: {floor}, "
            f"rect: {{min_x: {x0}, min_y: {y0}, max_x: {x1}, max_y: {y1}}}}}")


def wall(x0, y0, x1, y1, att, floor=0):
    return f"    - {{from: [{x0}, {y0}], to: [{x1}, {y1}], floor: {floor}, attenuation: {att}}}"


def beacon(n, x, y, floor=0):
    return f"    - {{id: {beacon_id(n)}, x: {x}, y: {y}, floor: {floor}}}"


def even(count, x0, x1, y):
    step = (x1 - x0) / count
    return [(x0 + (i + 0.5) * step, y) for i in range(count)]


def four_rooms(env_id, b_count, walls_db=6):
    # 2x2 rooms of 7 m x 6.5 m (45.5 m2). Beacons sit evenly along each
    # room's long axis on its centre line.
    rooms = {"A": (0, 6.5, 7, 13), "B": (7, 6.5, 14, 13), "C": (0, 0, 7, 6.5), "D": (7, 0, 14, 6.5)}
    lines = [f"  id: {env_id}", "  bounds: {min_x: 0, min_y: 0, max_x: 14, max_y: 13}", "  areas:"]
    lines += [rect(k, *v) for k, v in rooms.items()]
    lines += ["  walls:", wall(7, 0, 7, 13, walls_db), wall(0, 6.5, 14, 6.5, walls_db), "  beacons:"]
    n = 1
    for label, (x0, y0, x1, y1) in rooms.items():
        count = b_count if label == "B" else 2
        for x, y in even(count, x0, x1, (y0 + y1) / 2):
            lines.append(beacon(n, x, y))
            n += 1
    return "\n".join(lines)


def device(raw, waypoints, paired=True):
    pts = ", ".join(f"{{t: {t}, x: {x}, y: {y}, floor: {f}}}" for t, x, y, f in waypoints)
    return f"  - id: {raw}\n    paired: {'true' if paired else 'false'}\n    waypoints: [{pts}]"


def four_rooms_scenario(b_count):
    # One user visiting A, B, D, C for one cycle each.
    tour = [(0, 3.5, 9.75, 0), (14, 3.5, 9.75, 0), (15, 10.5, 9.75, 0), (29, 10.5, 9.75, 0),
            (30, 10.5, 3.25, 0), (44, 10.5, 3.25, 0), (45, 3.5, 3.25, 0), (59, 3.5, 3.25, 0)]
    return "\n".join([
        "# Four-room floor; area B holds %d beacon(s), the others 2 each." % b_count,
        "environment:",
        four_rooms(f"env1-b{b_count}", b_count),
        "path_loss: {rssi_at_1m: -45, exponent: 2.5, noise_sigma: 2}",
        "setup: {layout: area_centres, dwell_s: 5}",
        "simulation: {seed: 42, duration_s: 60}",
        "devices:",
        device("visitor-1", tour),
        "",
    ])


def walk(cycles=40, seed=11):
    rng = random.Random(seed)
    rooms = [(0, 6.5, 7, 13), (7, 6.5, 14, 13), (0, 0, 7, 6.5), (7, 0, 14, 6.5)]
    points = []
    for k in range(cycles):
        x0, y0, x1, y1 = rng.choice(rooms)
        x, y = round(rng.uniform(x0 + 0.5, x1 - 0.5), 2), round(rng.uniform(y0 + 0.5, y1 - 0.5), 2)
        points += [(15 * k, x, y, 0), (15 * k + 14, x, y, 0)]
    return "\n".join([
        "# Random room-to-room walk on the four-room floor, one stop per cycle.",
        "environment:",
        four_rooms("env1-walk", 2),
        "path_loss: {rssi_at_1m: -45, exponent: 2.5, noise_sigma: 2}",
        "setup: {grid_spacing: 1.5, dwell_s: 5}",
        f"simulation: {{seed: 5, duration_s: {15 * cycles}}}",
        "devices:",
        device("walker-1", points),
        "",
    ])


def two_floors_scenario():
    # Two floors of three rooms, one beacon per room.
    lines = ["  id: building-2f", "  bounds: {min_x: 0, min_y: 0, max_x: 15, max_y: 6}",
             "  floor_height: 3", "  floor_attenuation: 20", "  areas:"]
    names = {0: ["lab", "lobby", "office"], 1: ["library", "lounge", "studio"]}
    for f in (0, 1):
        for i, name in enumerate(names[f]):
            lines.append(rect(name, 5 * i, 0, 5 * i + 5, 6, f))
    lines.append("  walls:")
    for f in (0, 1):
        lines += [wall(5, 0, 5, 6, 6, f), wall(10, 0, 10, 6, 6, f)]
    lines.append("  beacons:")
    n = 1
    for f in (0, 1):
        for i in range(3):
            lines.append(beacon(n, 5 * i + 2.5, 3, f))
            n += 1

    def room(f, i, dx=0.0, dy=0.0):
        return (5 * i + 2.5 + dx, 3 + dy, f)

    # (floor, room) at T0..T3; users 1 and 2 meet twice, 3 and 4 once.
    plans = {
        "user-1": [room(0, 0, -1), room(0, 1, -1), room(1, 0, 1), room(1, 1, 1, 1)],
        "user-2": [room(0, 1, 1), room(0, 1, 1, 1), room(1, 0, -1, 1), room(1, 2)],
        "user-3": [room(1, 2, 1), room(1, 1, -1), room(0, 0, 1, 1), room(0, 0, -1, -1)],
        "user-4": [room(0, 2, 0, -1), room(0, 2, 1), room(0, 1, 0, -1), room(1, 1, -1, -1)],
    }
    devices = []
    for raw, stops in plans.items():
        wps = []
        for k, (x, y, f) in enumerate(stops):
            wps += [(15 * k, x, y, f), (15 * k + 14, x, y, f)]
        devices.append(device(raw, wps))
    return "\n".join([
        "# Two floors, six beacons, four users tracked over four cycles.",
        "environment:",
        "\n".join(lines),
        "path_loss: {rssi_at_1m: -45, exponent: 2.5, noise_sigma: 2}",
        "setup: {grid_spacing: 1.5, dwell_s: 5}",
        "simulation: {seed: 7, duration_s: 60}",
        "devices:",
        "\n".join(devices),
        "",
    ])


def main():
    OUT.mkdir(exist_ok=True)
    for b in (1, 2, 3):
        (OUT / f"four_rooms_b{b}.yaml").write_text(four_rooms_scenario(b))
    (OUT / "walk.yaml").write_text(walk())
    (OUT / "two_floors.yaml").write_text(two_floors_scenario())


if __name__ == "__main__":
    main()
