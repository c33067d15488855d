import numpy as np
import pytest
from hypothesis import strategies as st

from dasc.model import (
    DipoleChannel,
    DriveConfig,
    EmitterModel,
    PhononBathConfig,
    PhononChannel,
    ghz_to_rad_ps,
    merge_ground_states,
    siv_four_level,
)

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def four_level():
    return siv_four_level()


@pytest.fixture
def three_level():
    return merge_ground_states(siv_four_level())


@st.composite
def random_setup(draw, min_T=0.0):
    """A random valid (model, drive, bath) triple over 2-, 3- and 4-level emitters."""
    kind = draw(st.sampled_from(["two", "three", "four"]))
    energies_ghz = draw(st.lists(st.floats(-300, 300), min_size=4, max_size=4))
    gamma = draw(st.floats(1e-4, 1e-2))
    if kind == "two":
        model = EmitterModel((0.0, ghz_to_rad_ps(energies_ghz[0])), (0,), (1,),
                             (DipoleChannel(0, 1, "x", draw(st.floats(0.3, 1.5))),),
                             (PhononChannel(1, 1, draw(st.floats(0.1, 2.0))),), 0.0, gamma)
    elif kind == "three":
        e1, e2 = sorted(ghz_to_rad_ps(np.array(energies_ghz[:2])))
        if e2 - e1 < 0.05:
            e2 = e1 + 0.05
        model = EmitterModel((0.0, float(e1), float(e2)), (0,), (1, 2),
                             (DipoleChannel(0, 1, "x", draw(st.floats(0.3, 1.5))),
                              DipoleChannel(0, 2, draw(st.sampled_from("xyz")), draw(st.floats(0.3, 1.5)))),
                             (PhononChannel(1, 2, draw(st.floats(0.1, 2.0))), PhononChannel(1, 1),
                              PhononChannel(2, 2)), 0.0, gamma)
    else:
        model = siv_four_level(draw(st.floats(20, 80)), draw(st.floats(150, 350)), gamma)
    drive = DriveConfig(ghz_to_rad_ps(draw(st.floats(-600, 200))),
                        {p: draw(st.floats(0.0, 0.4)) for p in "xyz"})
    bath = PhononBathConfig(draw(st.floats(min_T, 100.0)), draw(st.floats(1e-3, 5e-2)))
    return model, drive, bath
