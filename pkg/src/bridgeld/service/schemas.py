"""Pydantic wire models shared by the service apps."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field

from ..model import DescriptionRequest, Violation


class DatasetDescription(BaseModel):
    """POST body for /registry/datasets and /mqa/preview."""

    model_config = ConfigDict(populate_by_name=True)

    entity_type: str = Field(alias="entityType")
    description: str = ""
    creators: list[str] = []
    providers: list[str] = []
    themes: list[str] = []
    access_rights: str = Field("Public", alias="accessRights")
    language: str = "English"
    locations: list[str] = []
    keywords: list[str] = []

    def to_request(self) -> DescriptionRequest:
        # from_dict re-applies label parsing, so bad labels raise ValueError
        return DescriptionRequest.from_dict(self.model_dump(by_alias=True))


class ViolationModel(BaseModel):
    field: str
    rule: str
    message: str

    @classmethod
    def from_violation(cls, violation: Violation) -> "ViolationModel":
        return cls(field=violation.field, rule=violation.rule, message=violation.message)


class ValidationProblem(BaseModel):
    detail: str = "request failed validation"
    violations: list[ViolationModel]


class ReceiptEntry(BaseModel):
    id: str
    action: str


class RegisterResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    catalogue_id: str = Field(alias="catalogueId")
    dataset_id: str = Field(alias="datasetId")
    distribution_ids: list[str] = Field(alias="distributionIds")
    receipt: list[ReceiptEntry]


class MetricModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    name: str
    dimension: str
    points: int
    max_points: int = Field(alias="maxPoints")
    passed: bool


class QualityReportModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    findability: int
    accessibility: int
    interoperability: int
    reusability: int
    contextuality: int
    total: int
    max_total: int = Field(alias="maxTotal")
    rating: str
    per_metric: list[MetricModel] = Field(alias="perMetric")


class VocabEntryModel(BaseModel):
    token: str
    iri: str
    label: str


class VocabulariesResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    themes: list[VocabEntryModel]
    languages: list[VocabEntryModel]
    countries: list[VocabEntryModel]
    access_rights: list[VocabEntryModel] = Field(alias="accessRights")
    licences: list[VocabEntryModel]


class HealthResponse(BaseModel):
    status: str = "ok"


class SubscribeResponse(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    subscription_id: str = Field(alias="subscriptionId")


class ErrorDetail(BaseModel):
    detail: str
    rule: Optional[str] = None
