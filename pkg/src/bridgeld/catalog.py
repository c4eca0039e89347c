"""Catalog store with the action-API behaviors the harvester and exporters use.

Organizations and packages live in memory under one lock; persist()/load()
move the whole store through a single pretty-printed JSON document. Every
content change advances a strictly monotone snapshot stamp so downstream
pagination can detect mutation.
"""

from __future__ import annotations

import json
import threading
from datetime import datetime, timedelta
from pathlib import Path
from typing import Any, Callable, Optional, Union

from .model import (
    CatalogOrganization,
    CatalogPackage,
    CatalogResource,
    isoformat_utc,
    parse_datetime,
    utcnow,
)


class CatalogError(Exception):
    pass


class AuthorizationError(CatalogError):
    pass


class Conflict(CatalogError):
    pass


class NotFoundError(CatalogError):
    pass


class FailedDependency(CatalogError):
    pass


class LoadError(CatalogError):
    pass


class TokenStore:
    """API tokens per user, loaded from a flat file of user<TAB>token lines."""

    def __init__(self, tokens: Optional[dict[str, str]] = None):
        self._tokens = dict(tokens or {})

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "TokenStore":
        tokens: dict[str, str] = {}
        for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise LoadError(f"{path}:{lineno}: expected user<TAB>token")
            tokens[parts[0]] = parts[1]
        return cls(tokens)

    def valid(self, user: str, token: str) -> bool:
        return bool(user) and self._tokens.get(user) == token

    def valid_token(self, token: Optional[str]) -> bool:
        return token is not None and token in self._tokens.values()


def organization_to_dict(org: CatalogOrganization) -> dict[str, Any]:
    return {
        "id": org.id,
        "name": org.name,
        "title": org.title,
        "description": org.description,
        "extras": [{"key": k, "value": org.extras[k]} for k in sorted(org.extras)],
        "packages": list(org.packages),
    }


def organization_from_dict(doc: dict[str, Any]) -> CatalogOrganization:
    return CatalogOrganization(
        id=doc["id"],
        name=doc["name"],
        title=doc["title"],
        description=doc["description"],
        extras={item["key"]: item["value"] for item in doc.get("extras", [])},
        packages=tuple(doc.get("packages", [])),
    )


def resource_to_dict(resource: CatalogResource) -> dict[str, Any]:
    return {
        "id": resource.id,
        "name": resource.name,
        "description": resource.description,
        "url": resource.url,
        "access_url": resource.access_url,
        "download_url": resource.download_url,
        "size": resource.size,
        "mimetype": resource.mimetype,
        "format": resource.format,
        "license": resource.license,
        "rights": resource.rights,
        "created": resource.created,
        "last_modified": resource.last_modified,
    }


def resource_from_dict(doc: dict[str, Any]) -> CatalogResource:
    return CatalogResource(
        id=doc["id"],
        name=doc["name"],
        description=doc.get("description", ""),
        url=doc["url"],
        access_url=doc.get("access_url", doc["url"]),
        download_url=doc.get("download_url", doc["url"]),
        size=doc.get("size"),
        mimetype=doc.get("mimetype"),
        format=doc.get("format"),
        license=doc.get("license"),
        rights=doc.get("rights"),
        created=doc["created"],
        last_modified=doc["last_modified"],
    )


def package_to_dict(pkg: CatalogPackage) -> dict[str, Any]:
    return {
        "id": pkg.id,
        "name": pkg.name,
        "title": pkg.title,
        "notes": pkg.notes,
        "owner_org": pkg.owner_org,
        "metadata_created": pkg.metadata_created,
        "metadata_modified": pkg.metadata_modified,
        "author": pkg.author,
        "license_id": pkg.license_id,
        "maintainer": pkg.maintainer,
        "url": pkg.url,
        "tags": [{"name": tag} for tag in pkg.tags],
        "resources": [resource_to_dict(r) for r in pkg.resources],
        "extras": [{"key": k, "value": pkg.extras[k]} for k in sorted(pkg.extras)],
    }


def package_from_dict(doc: dict[str, Any]) -> CatalogPackage:
    return CatalogPackage(
        id=doc["id"],
        name=doc["name"],
        title=doc["title"],
        notes=doc.get("notes", ""),
        owner_org=doc["owner_org"],
        metadata_created=doc["metadata_created"],
        metadata_modified=doc["metadata_modified"],
        author=doc.get("author"),
        license_id=doc.get("license_id"),
        maintainer=doc.get("maintainer"),
        url=doc.get("url"),
        tags=tuple(item["name"] for item in doc.get("tags", [])),
        resources=tuple(resource_from_dict(r) for r in doc.get("resources", [])),
        extras={item["key"]: item["value"] for item in doc.get("extras", [])},
    )


class CatalogStore:
    def __init__(
        self,
        clock: Callable[[], datetime] = utcnow,
        tokens: Optional[TokenStore] = None,
    ):
        self._organizations: dict[str, CatalogOrganization] = {}
        self._org_names: dict[str, str] = {}
        self._packages: dict[str, CatalogPackage] = {}
        self._package_names: dict[str, str] = {}
        self._lock = threading.RLock()
        self._clock = clock
        self._changed_at = clock()
        self.tokens = tokens
        self.version = 0

    def _authorize(self, token: Optional[str]) -> None:
        if self.tokens is not None and not self.tokens.valid_token(token):
            raise AuthorizationError("missing or unknown API token")

    def _touch(self) -> None:
        # strictly monotone even under a frozen test clock
        now = self._clock()
        floor = self._changed_at + timedelta(microseconds=1)
        self._changed_at = now if now > floor else floor
        self.version += 1

    def snapshot_stamp(self) -> str:
        with self._lock:
            return self._changed_at.isoformat()

    # --- organizations ----------------------------------------------------

    def organization_create(self, org: CatalogOrganization, token: Optional[str] = None) -> str:
        self._authorize(token)
        with self._lock:
            if org.name in self._org_names or org.id in self._organizations:
                raise Conflict(f"organization {org.name!r} already exists")
            self._organizations[org.id] = org
            self._org_names[org.name] = org.id
            self._touch()
            return org.id

    def organization_show(self, id_or_name: str) -> CatalogOrganization:
        with self._lock:
            org_id = self._org_names.get(id_or_name, id_or_name)
            if org_id not in self._organizations:
                raise NotFoundError(f"organization {id_or_name!r} not found")
            return self._organizations[org_id]

    def organization_list(self) -> list[str]:
        with self._lock:
            return sorted(self._org_names)

    # --- packages ---------------------------------------------------------

    def package_upsert(self, pkg: CatalogPackage, token: Optional[str] = None) -> str:
        self._authorize(token)
        with self._lock:
            if pkg.owner_org not in self._organizations:
                raise FailedDependency(f"owner_org {pkg.owner_org!r} does not exist")
            taken = self._package_names.get(pkg.name)
            if taken is not None and taken != pkg.id:
                raise Conflict(f"package name {pkg.name!r} is taken by {taken!r}")
            existing = self._packages.get(pkg.id)
            action = "updated" if existing is not None else "created"
            if existing is not None and package_to_dict(existing) == package_to_dict(pkg):
                # re-harvest of unchanged metadata must not move the snapshot
                return action
            if existing is not None and existing.name != pkg.name:
                del self._package_names[existing.name]
            self._packages[pkg.id] = pkg
            self._package_names[pkg.name] = pkg.id
            owner = self._organizations[pkg.owner_org]
            if pkg.id not in owner.packages:
                self._organizations[pkg.owner_org] = CatalogOrganization(
                    id=owner.id,
                    name=owner.name,
                    title=owner.title,
                    description=owner.description,
                    extras=owner.extras,
                    packages=(*owner.packages, pkg.id),
                )
            self._touch()
            return action

    def package_show(self, id_or_name: str) -> CatalogPackage:
        with self._lock:
            pkg_id = self._package_names.get(id_or_name, id_or_name)
            if pkg_id not in self._packages:
                raise NotFoundError(f"package {id_or_name!r} not found")
            return self._packages[pkg_id]

    def package_list(self) -> list[str]:
        with self._lock:
            return sorted(self._package_names)

    def packages_by_name(self) -> list[CatalogPackage]:
        with self._lock:
            return [self._packages[self._package_names[name]] for name in sorted(self._package_names)]

    # --- persistence ------------------------------------------------------

    def to_document(self) -> dict[str, Any]:
        with self._lock:
            return {
                "changedAt": self._changed_at.isoformat(),
                "version": self.version,
                "organizations": [
                    organization_to_dict(self._organizations[self._org_names[n]])
                    for n in sorted(self._org_names)
                ],
                "packages": [package_to_dict(p) for p in self.packages_by_name()],
            }

    def persist(self, path: Union[str, Path]) -> None:
        document = self.to_document()
        Path(path).write_text(
            json.dumps(document, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def load(self, path: Union[str, Path]) -> None:
        try:
            text = Path(path).read_text("utf-8")
        except OSError as exc:
            raise LoadError(f"cannot read {path}: {exc}") from exc
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise LoadError(f"{path}: invalid JSON at offset {exc.pos}: {exc.msg}") from exc
        try:
            organizations = [organization_from_dict(d) for d in document["organizations"]]
            packages = [package_from_dict(d) for d in document["packages"]]
            changed_at = parse_datetime(document["changedAt"])
            version = int(document["version"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LoadError(f"{path}: malformed store document: {exc}") from exc
        with self._lock:
            self._organizations = {o.id: o for o in organizations}
            self._org_names = {o.name: o.id for o in organizations}
            self._packages = {p.id: p for p in packages}
            self._package_names = {p.name: p.id for p in packages}
            self._changed_at = changed_at
            self.version = version
