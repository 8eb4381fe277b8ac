import json
import logging
import sqlite3
from datetime import datetime
from typing import Any, Dict, List, Optional

import fakeredis

logger = logging.getLogger(__name__)

JSON_COLUMNS = ("inputs", "report", "verification")


class RunStore:
    """
    Audit trail of analysis runs shared by the pipeline, the CLI and the HTTP service.
    Uses fakeredis for the live records and, when a history database is configured,
    SQLite so runs survive the process.
    """

    def __init__(self, db_path: Optional[str] = None):
        # Initialize fakeredis for in-memory storage
        self.redis = fakeredis.FakeStrictRedis()

        self.db_path = db_path
        if self.db_path:
            self._initialize_db()

    def _initialize_db(self):
        """Initialize SQLite database with required tables"""
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()

        cursor.execute('''
        CREATE TABLE IF NOT EXISTS runs (
            run_id TEXT PRIMARY KEY,
            timestamp TEXT,
            status TEXT,
            inputs TEXT,
            report TEXT,
            exit_status INTEGER,
            verification TEXT,
            error TEXT
        )
        ''')

        # One row per pipeline stage action
        cursor.execute('''
        CREATE TABLE IF NOT EXISTS traces (
            id INTEGER PRIMARY KEY AUTOINCREMENT,
            run_id TEXT,
            timestamp TEXT,
            stage TEXT,
            action TEXT,
            data TEXT,
            FOREIGN KEY (run_id) REFERENCES runs (run_id)
        )
        ''')

        conn.commit()
        conn.close()

    def _execute(self, sql: str, params: tuple) -> None:
        if not self.db_path:
            return
        conn = sqlite3.connect(self.db_path)
        cursor = conn.cursor()
        cursor.execute(sql, params)
        conn.commit()
        conn.close()

    def _load(self, run_id: str) -> Dict[str, Any]:
        raw = self.redis.get(f"run:{run_id}")
        if raw is None:
            raise KeyError(f"unknown run '{run_id}'")
        return json.loads(raw)

    def _save(self, run_data: Dict[str, Any]) -> None:
        self.redis.set(f"run:{run_data['run_id']}", json.dumps(run_data))

    def initialize_run(self, run_id: str, timestamp: str) -> str:
        """Initialize a new run in memory and database"""
        self._save({"run_id": run_id, "timestamp": timestamp, "status": "initialized", "traces": []})
        self.redis.rpush("runs", run_id)
        self._execute(
            "INSERT INTO runs (run_id, timestamp, status) VALUES (?, ?, ?)",
            (run_id, timestamp, "initialized"),
        )
        return run_id

    def store_inputs(self, run_id: str, inputs: List[str]):
        """Store the analyzed file names of a run"""
        run_data = self._load(run_id)
        run_data["inputs"] = inputs
        run_data["status"] = "input_received"
        self._save(run_data)
        self._execute(
            "UPDATE runs SET inputs = ?, status = ? WHERE run_id = ?",
            (json.dumps(inputs), "input_received", run_id),
        )
        self.add_trace(run_id, "system", "input_received", {"files": len(inputs)})

    def store_report(self, run_id: str, report: Dict[str, Any], exit_status: int):
        """Store the classification report and the exit status it produced"""
        run_data = self._load(run_id)
        run_data["report"] = report
        run_data["exit_status"] = exit_status
        run_data["status"] = "classified"
        self._save(run_data)
        self._execute(
            "UPDATE runs SET report = ?, exit_status = ?, status = ? WHERE run_id = ?",
            (json.dumps(report), exit_status, "classified", run_id),
        )
        self.add_trace(run_id, "classifier", "report_stored", {"counts": report.get("summary", {}).get("counts", {})})

    def store_verification(self, run_id: str, verification: Dict[str, Any]):
        """Store the outcome of the dynamic containment check"""
        run_data = self._load(run_id)
        run_data["verification"] = verification
        run_data["status"] = "verified"
        self._save(run_data)
        self._execute(
            "UPDATE runs SET verification = ?, status = ? WHERE run_id = ?",
            (json.dumps(verification), "verified", run_id),
        )
        self.add_trace(run_id, "oracle", "verification_completed", {
            "violations": len(verification.get("violations", [])),
        })

    def store_error(self, run_id: str, error: str, exit_status: Optional[int] = None):
        """Store error information for a run"""
        run_data = self._load(run_id)
        run_data["error"] = error
        run_data["status"] = "error"
        if exit_status is not None:
            run_data["exit_status"] = exit_status
        self._save(run_data)
        self._execute(
            "UPDATE runs SET error = ?, exit_status = ?, status = ? WHERE run_id = ?",
            (error, exit_status, "error", run_id),
        )
        self.add_trace(run_id, "system", "error", {"error": error})

    def add_trace(self, run_id: str, stage: str, action: str, data: Dict[str, Any]):
        """Add a trace entry for a run"""
        timestamp = datetime.now().isoformat()

        run_data = self._load(run_id)
        run_data.setdefault("traces", []).append({
            "timestamp": timestamp,
            "stage": stage,
            "action": action,
            "data": data,
        })
        self._save(run_data)

        self._execute(
            "INSERT INTO traces (run_id, timestamp, stage, action, data) VALUES (?, ?, ?, ?, ?)",
            (run_id, timestamp, stage, action, json.dumps(data)),
        )
        logger.debug(f"[{run_id}] {stage}: {action}")

    def get_run(self, run_id: str) -> Optional[Dict[str, Any]]:
        """Get all data for a run, falling back to the history database"""
        raw = self.redis.get(f"run:{run_id}")
        if raw:
            return json.loads(raw)
        if not self.db_path:
            return None

        conn = sqlite3.connect(self.db_path)
        conn.row_factory = sqlite3.Row
        cursor = conn.cursor()

        cursor.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,))
        row = cursor.fetchone()
        if not row:
            conn.close()
            return None

        run_data = {key: value for key, value in dict(row).items() if value is not None}
        for column in JSON_COLUMNS:
            if column in run_data:
                run_data[column] = json.loads(run_data[column])

        cursor.execute("SELECT timestamp, stage, action, data FROM traces WHERE run_id = ? ORDER BY id", (run_id,))
        traces = []
        for trace_row in cursor.fetchall():
            trace = dict(trace_row)
            trace["data"] = json.loads(trace["data"])
            traces.append(trace)
        run_data["traces"] = traces
        conn.close()

        # Cache in Redis for future access
        self._save(run_data)
        return run_data

    def list_runs(self) -> List[Dict[str, Any]]:
        """Summary of all runs, newest first"""
        if self.db_path:
            conn = sqlite3.connect(self.db_path)
            conn.row_factory = sqlite3.Row
            cursor = conn.cursor()
            cursor.execute("SELECT run_id, timestamp, status FROM runs ORDER BY timestamp DESC, rowid DESC")
            runs = [dict(row) for row in cursor.fetchall()]
            conn.close()
            return runs

        runs = []
        for raw_id in reversed(self.redis.lrange("runs", 0, -1)):
            run_data = self._load(raw_id.decode("utf-8"))
            runs.append({key: run_data.get(key) for key in ("run_id", "timestamp", "status")})
        return runs
