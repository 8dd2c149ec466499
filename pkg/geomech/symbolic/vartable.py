from enum import Enum

from geomech.symbolic.expr import free_variables


class Role(str, Enum):
    """Coordinate roles, listed in the order used by the stable printer."""
    MOMENTUM_JET = "momentum_jet"  # pdot, p^l_{dl}
    MOMENTUM = "momentum"
    SECOND_JET = "second_jet"  # xddot, y^a_{ij}
    JET = "jet"  # velocities and first jets
    FIBER = "fiber"  # positions and field values
    BASE = "base"
    AUXILIARY = "auxiliary"


_RANK = {role: rank for rank, role in enumerate(Role)}
_UNREGISTERED = 10 ** 9


class VarTable:
    """Ordered registry of variable names with their roles.

    The registration order inside a role is the order in which terms are
    printed, so tables built from the same model always print identically.
    """

    def __init__(self, entries=()):
        self._roles = {}
        self._index = {}
        for name, role in entries:
            self.add(name, role)

    def add(self, name, role):
        role = Role(role)
        if name in self._roles:
            if self._roles[name] != role:
                raise ValueError(f"Variable '{name}' already registered as {self._roles[name].value}")
            return
        self._index[name] = len(self._roles)
        self._roles[name] = role

    def extend(self, names, role):
        for name in names:
            self.add(name, role)
        return self

    def role(self, name):
        return self._roles[name]

    def names(self, role=None):
        if role is None:
            return list(self._roles)
        role = Role(role)
        return [name for name, r in self._roles.items() if r == role]

    def sort_key(self, name):
        """Key ordering variables by role rank then registration order."""
        if name not in self._roles:
            return (_RANK[Role.AUXILIARY], _UNREGISTERED, name)
        return (_RANK[self._roles[name]], self._index[name], name)

    def unregistered(self, exprs):
        """Names used by ``exprs`` that are not in the table."""
        used = set()
        for e in exprs:
            used |= free_variables(e)
        return sorted(used - set(self._roles))

    def merged(self, other):
        table = VarTable(self.items())
        for name, role in other.items():
            table.add(name, role)
        return table

    def items(self):
        return list(self._roles.items())

    def __contains__(self, name):
        return name in self._roles

    def __len__(self):
        return len(self._roles)

    def __iter__(self):
        return iter(self._roles)

    def __repr__(self):
        return f"VarTable({self.items()!r})"


def default_sort_key(name):
    return (0, 0, name)
