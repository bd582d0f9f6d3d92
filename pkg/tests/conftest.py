import os
import tempfile

# база отчётов сервиса - во временном каталоге, до импорта prismext.config
os.environ["PRISMEXT_DATABASE_URL"] = (
    f"sqlite+aiosqlite:///{os.path.join(tempfile.mkdtemp(prefix='prismext-'), 'reports.db')}"
)
