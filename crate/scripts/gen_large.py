"""Writes large_500.rt: a model with exactly 500 elements."""

UNITS = 20
STATES = 8
MSGS = 10


def main():
    out = ["model Large {", "protocol Bus {"]
    for i in range(MSGS):
        out.append(f"  {'in' if i % 2 == 0 else 'out'} msg m{i};")
    out.append("}")
    for u in range(UNITS):
        out += ["", f"capsule Unit{u} {{", "  port b : Bus;", "  port c : ~Bus;", "  statemachine {", "    initial -> S0;"]
        out += [f"    state S{s};" for s in range(STATES)]
        for s in range(STATES):
            out.append(f"    S{s} -> S{(s + 1) % STATES} on b.m{(s + u) % MSGS};")
        out += ["  }", "}"]
    out += ["", "capsule System {"]
    out += [f"  part u{u} : Unit{u};" for u in range(UNITS)]
    out += [f"  connect u{u}.c to u{u + 1}.b;" for u in range(UNITS - 1)]
    out += ["  statemachine {", "    initial -> Boot;"]
    names = ["Boot", "Init", "Check", "Load", "Run", "Pause", "Resume", "Drain", "Flush", "Stop", "Fault", "Reset"]
    out += [f"    state {n};" for n in names]
    for a, b in zip(names, names[1:]):
        out.append(f"    {a} -> {b};")
    out += ["    Pause -> Run;", "    Stop -> Boot;", "    Check -> Fault;"]
    out += ["  }", "}", "}"]
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    import pathlib

    target = pathlib.Path(__file__).resolve().parent.parent / "corpus" / "large_500.rt"
    with open(target, "w") as f:
        f.write(main())
