"""The text formats and the command-line tool, driven programmatically.

Run:  python demos/06_dsl_and_cli.py
"""

import tempfile
from pathlib import Path

from pappa.cli import main

LOOP_PD = """\
# a charged loop at d=3: charges 1 and 2 merge to 0, the loop is neutral
diagram d=3 in=0 out=0
cap@0
chg@1:1:1
chg@1:2:0
cup@0
"""

BELL_PC = """\
circuit d=2 n=2
sft
measure@1 -> m1
measure@2 -> m2
"""

TELEPORT_PP = """\
party alice: q1 q2
party bob: q3
input: q1
resource max2: q2 q3
ctrl X c=q1 t=q2
gate F^-1 @q1
meter q1 -> m1
meter q2 -> m2
send alice->bob m1
send alice->bob m2
cond m2 apply X^m2 @q3
cond m1 apply Z^m1 @q3
output: q3
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    (tmp / "loop.pd").write_text(LOOP_PD)
    (tmp / "bell.pc").write_text(BELL_PC)
    (tmp / "teleport.pp").write_text(TELEPORT_PP)

    print("$ pappa diagram eval loop.pd")
    main(["diagram", "eval", str(tmp / "loop.pd")])

    print("\n$ pappa circuit run bell.pc --seed 7  (outcomes are correlated)")
    main(["circuit", "run", str(tmp / "bell.pc"), "--seed", "7"])

    print("\n$ pappa protocol run teleport.pp --d 2 --seed 7")
    main(["protocol", "run", str(tmp / "teleport.pp"), "--d", "2", "--seed", "7"])

    print("\n$ pappa verify sft --d 3 --n 2")
    main(["verify", "sft", "--d", "3", "--n", "2"])
