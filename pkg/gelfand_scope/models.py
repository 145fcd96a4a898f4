from __future__ import annotations

from datetime import datetime

from sqlalchemy import JSON, Column, DateTime, Integer, String, UniqueConstraint
from sqlalchemy.orm import declarative_base

Base = declarative_base()


class CharacterTableRecord(Base):
    __tablename__ = "character_tables"
    __table_args__ = (UniqueConstraint("fingerprint", "prime", name="uq_table_fingerprint_prime"),)

    id = Column(Integer, primary_key=True, autoincrement=True)
    fingerprint = Column(String(64), nullable=False, index=True)
    prime = Column(Integer, nullable=False)
    group_order = Column(Integer, nullable=False)
    class_count = Column(Integer, nullable=False)
    degrees = Column(JSON, nullable=False)
    values = Column(JSON, nullable=False)
    created_at = Column(DateTime, default=datetime.utcnow, nullable=False)
