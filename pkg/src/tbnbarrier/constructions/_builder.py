from __future__ import annotations

from ..kinetics import Path
from ..model import Configuration, Monomer, TBNError


class PathBuilder:
    """Records a configuration after every named merge or split."""

    def __init__(self, polymers: dict[str, list[Monomer]]):
        self.polymers = {k: list(v) for k, v in polymers.items()}
        self.snapshots = [self.configuration()]

    def configuration(self) -> Configuration:
        return Configuration(self.polymers.values())

    def merge(self, into: str, other: str) -> None:
        self.polymers[into].extend(self.polymers.pop(other))
        self.snapshots.append(self.configuration())

    def split(self, source: str, part: list[Monomer], name: str) -> None:
        if name in self.polymers:
            raise TBNError(f"polymer name {name!r} already in use")
        pool = self.polymers[source]
        for m in part:
            pool.remove(m)
        if not pool:
            raise TBNError("split must leave both sides nonempty")
        self.polymers[name] = list(part)
        self.snapshots.append(self.configuration())

    def rename(self, old: str, new: str) -> None:
        self.polymers[new] = self.polymers.pop(old)

    def path(self) -> Path:
        return Path(self.snapshots)
