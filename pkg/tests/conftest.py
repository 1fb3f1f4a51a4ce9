import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pubrec.graph import ArcKind, Node
from pubrec.profiles import DeviceProfile, ScreenClass, UserProfile
from pubrec.store import Store


@pytest.fixture
def store():
    with Store.open() as s:
        yield s


def add_person(store, n, *, gender=0, age=25, prefs=(), name=None, secret="pw",
               device=None, photo=None):
    """One user + device + node, ids u<n>/d<n>/n<n>."""
    device = device or DeviceProfile(f"d{n}", ScreenClass.DESKTOP, True, 10, 65536)
    if device.device_id not in store.devices:
        store.put_device(device)
    user = UserProfile(f"u{n}", name or f"user{n}", gender, age,
                       frozenset(prefs), photo)
    store.put_user(user, secret=secret)
    store.add_node(Node(f"n{n}", user.user_id, device.device_id))
    return user


def befriend(store, a, b, created_at=0.0):
    return store.add_interaction(ArcKind.USER_USER, f"n{a}", f"n{b}", created_at)
