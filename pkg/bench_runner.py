#!/usr/bin/env python3
"""
Bench Runner - runs engines over an instance corpus and cross-checks their answers
Records go to stdout as key=value lines (or JSON lines) and into a sqlite database.
"""

import json
import logging
import random
import sqlite3
import time
import uuid
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, field
from datetime import datetime
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import psutil

from engines import Engine, run_engine
from errors import BenchDisagreement, CapacityError, SpectralEditError, UsageError
from graph_core import random_graph
from instance_files import INSTANCE_SUFFIX, format_record, serialize_instance, parse_instance
from oracle import Answer, Instance, ProblemKind
from solver_config import SolverConfig

logger = logging.getLogger(__name__)

DEFAULT_BENCH_DB = "bench_runs.db"

# (kind, r) mix of the random corpus
CORPUS_KINDS: Sequence[Tuple[ProblemKind, int]] = (
    (ProblemKind.EVD, 2), (ProblemKind.EED, 2), (ProblemKind.EVD, 3), (ProblemKind.EEA, 2),
)


@dataclass
class RunRecord:
    """One engine run on one instance"""
    instance_id: str
    engine: str
    answer: str
    solution_size: Optional[int] = None
    wall_time: float = 0.0
    stats: Dict = field(default_factory=dict)
    verification: str = "n/a"
    peak_rss_mb: float = 0.0
    error: Optional[str] = None

    @property
    def decided(self) -> bool:
        return self.answer in (Answer.YES.value, Answer.NO.value)

    def to_fields(self) -> Dict:
        fields = {
            "instance": self.instance_id,
            "engine": self.engine,
            "answer": self.answer,
            "size": self.solution_size,
            "time": self.wall_time,
            "verified": self.verification,
            "rss_mb": self.peak_rss_mb,
        }
        fields.update(sorted(self.stats.items()))
        if self.error:
            fields["error"] = self.error
        return fields

    def to_line(self) -> str:
        return format_record(self.to_fields())

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def _rss_mb() -> float:
    return psutil.Process().memory_info().rss / (1024 * 1024)


def run_single(job: Tuple[str, str, str, Dict]) -> RunRecord:
    """Worker entry point: (instance id, instance text, engine name, config dict)"""
    instance_id, text, engine_name, config_data = job
    config = SolverConfig.from_dict(config_data)
    instance = parse_instance(text)
    rss_before = _rss_mb()
    start = time.perf_counter()
    record = RunRecord(instance_id, engine_name, answer="ERROR")
    try:
        result = run_engine(instance, Engine(engine_name), config)
        record.answer = result.answer.value
        record.engine = result.engine
        record.stats = dict(result.stats)
        if result.solution is not None:
            record.solution_size = result.solution.size
            record.verification = "passed"
    except CapacityError as e:
        record.answer = "CAPACITY"
        record.error = str(e)
    except UsageError as e:
        record.answer = "UNSUPPORTED"
        record.error = str(e)
    except SpectralEditError as e:
        record.error = f"{type(e).__name__}: {e}"
    record.wall_time = time.perf_counter() - start
    record.peak_rss_mb = max(rss_before, _rss_mb())
    return record


class BenchDatabase:
    """Bench sessions and their run records"""

    def __init__(self, db_path: str = DEFAULT_BENCH_DB):
        self.db_path = db_path
        self.init_database()

    def init_database(self):
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS bench_sessions (
                session_id TEXT PRIMARY KEY,
                created_at TEXT,
                corpus TEXT,
                engines TEXT,
                instances INTEGER,
                disagreements INTEGER DEFAULT 0,
                config_json TEXT
            )
        ''')
        cursor.execute('''
            CREATE TABLE IF NOT EXISTS run_records (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                session_id TEXT,
                instance_id TEXT,
                engine TEXT,
                answer TEXT,
                solution_size INTEGER,
                wall_time REAL,
                stats_json TEXT,
                verification TEXT,
                peak_rss_mb REAL,
                error TEXT,
                FOREIGN KEY (session_id) REFERENCES bench_sessions (session_id)
            )
        ''')
        conn.commit()
        conn.close()

    def create_session(self, corpus: str, engines: Sequence[str], instances: int,
                       config: SolverConfig) -> str:
        session_id = uuid.uuid4().hex[:12]
        conn = sqlite3.connect(self.db_path)
        conn.execute('''
            INSERT INTO bench_sessions (session_id, created_at, corpus, engines, instances, config_json)
            VALUES (?, ?, ?, ?, ?, ?)
        ''', (session_id, datetime.now().isoformat(), corpus, ",".join(engines), instances,
              json.dumps(config.to_dict())))
        conn.commit()
        conn.close()
        return session_id

    def save_records(self, session_id: str, records: Iterable[RunRecord]):
        conn = sqlite3.connect(self.db_path)
        conn.executemany('''
            INSERT INTO run_records (
                session_id, instance_id, engine, answer, solution_size, wall_time,
                stats_json, verification, peak_rss_mb, error
            ) VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
        ''', [(session_id, r.instance_id, r.engine, r.answer, r.solution_size, r.wall_time,
               json.dumps(r.stats, sort_keys=True), r.verification, r.peak_rss_mb, r.error)
              for r in records])
        conn.commit()
        conn.close()

    def mark_disagreements(self, session_id: str, count: int):
        conn = sqlite3.connect(self.db_path)
        conn.execute('UPDATE bench_sessions SET disagreements = ? WHERE session_id = ?',
                     (count, session_id))
        conn.commit()
        conn.close()

    def get_session_records(self, session_id: str) -> List[Dict]:
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute('SELECT * FROM run_records WHERE session_id = ? ORDER BY instance_id, id',
                       (session_id,))
        rows = cursor.fetchall()
        conn.close()
        return [dict(zip([col[0] for col in cursor.description], row)) for row in rows]


class BenchRunner:
    """Runs every engine on every instance and asserts that decided answers agree"""

    def __init__(self, config: Optional[SolverConfig] = None, db_path: Optional[str] = None):
        self.config = config or SolverConfig()
        self.database = BenchDatabase(db_path) if db_path else None
        self.logger = logging.getLogger(__name__)

    def run(self, corpus: Sequence[Tuple[str, Instance]], engines: Sequence[str],
            corpus_name: str = "-") -> List[RunRecord]:
        engine_order = {name: index for index, name in enumerate(engines)}
        texts = {instance_id: serialize_instance(instance) for instance_id, instance in corpus}
        jobs = [(instance_id, texts[instance_id], engine, self.config.to_dict())
                for instance_id, _ in corpus for engine in engines]
        self.logger.info(f"Bench: {len(corpus)} instances x {len(engines)} engines "
                         f"on {self.config.bench_workers} worker(s)")

        if self.config.bench_workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=self.config.bench_workers) as pool:
                records = list(pool.map(run_single, jobs))
        else:
            records = [run_single(job) for job in jobs]
        # engine names in records may carry a poly sub-case suffix
        requested = [job[2] for job in jobs]
        paired = sorted(zip(records, requested),
                        key=lambda pair: (pair[0].instance_id, engine_order[pair[1]]))
        records = [record for record, _ in paired]

        session_id = None
        if self.database is not None:
            session_id = self.database.create_session(corpus_name, engines, len(corpus), self.config)
            self.database.save_records(session_id, records)
        try:
            self.check_agreement(records, texts)
        except BenchDisagreement:
            if session_id is not None:
                self.database.mark_disagreements(session_id, 1)
            raise
        return records

    def check_agreement(self, records: Sequence[RunRecord], texts: Dict[str, str]) -> None:
        by_instance: Dict[str, List[RunRecord]] = {}
        for record in records:
            by_instance.setdefault(record.instance_id, []).append(record)
        for instance_id, group in by_instance.items():
            decided = [r for r in group if r.decided]
            for other in decided[1:]:
                if other.answer != decided[0].answer:
                    dump = "\n".join([texts.get(instance_id, "").rstrip(),
                                      decided[0].to_line(), other.to_line()])
                    self.logger.error(f"Engines disagree on {instance_id}")
                    raise BenchDisagreement(f"engines disagree on {instance_id}:\n{dump}",
                                            records=(decided[0], other))


def random_instance(rng: random.Random, n_max: int = 9, k_max: int = 4) -> Instance:
    kind, r = CORPUS_KINDS[rng.randrange(len(CORPUS_KINDS))]
    n = rng.randint(3, n_max)
    graph = random_graph(n, rng.uniform(0.2, 0.7), rng=rng)
    return Instance(kind, r, rng.randint(0, k_max), graph)


def make_corpus(directory: str, count: int, seed: int,
                n_max: int = 9, k_max: int = 4) -> List[Path]:
    """Write ``count`` seeded random instances; each header records the corpus seed"""
    target = Path(directory)
    target.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    width = max(3, len(str(count)))
    paths = []
    for index in range(count):
        instance = random_instance(rng, n_max, k_max)
        path = target / f"inst_{index:0{width}d}{INSTANCE_SUFFIX}"
        path.write_text(serialize_instance(instance, {"seed": seed, "index": index}))
        paths.append(path)
    logger.info(f"Wrote {count} instances to {target} (seed={seed})")
    return paths
