from __future__ import annotations

from typing import List, Optional

from sqlalchemy import select
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session

from .models import CharacterTableRecord


class CharacterTableRepository:
    def __init__(self, session: Session) -> None:
        self.session = session

    def get(self, fingerprint: str, prime: int) -> Optional[CharacterTableRecord]:
        result = self.session.execute(
            select(CharacterTableRecord).where(
                CharacterTableRecord.fingerprint == fingerprint,
                CharacterTableRecord.prime == prime,
            )
        )
        return result.scalars().first()

    def list_tables(self) -> List[CharacterTableRecord]:
        result = self.session.execute(
            select(CharacterTableRecord).order_by(CharacterTableRecord.group_order, CharacterTableRecord.prime)
        )
        return list(result.scalars().all())

    def add(
        self,
        fingerprint: str,
        prime: int,
        degrees: list[int],
        values: list[list[int]],
    ) -> CharacterTableRecord:
        record = CharacterTableRecord(
            fingerprint=fingerprint,
            prime=prime,
            group_order=sum(d * d for d in degrees),
            class_count=len(degrees),
            degrees=list(degrees),
            values=values,
        )
        self.session.add(record)
        try:
            self.session.commit()
        except IntegrityError:
            # Another run stored the same table first
            self.session.rollback()
            existing = self.get(fingerprint, prime)
            if existing is not None:
                return existing
            raise
        self.session.refresh(record)
        return record
