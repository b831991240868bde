# main.py
import logging
import sys

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from fh_app.config import settings
from fh_app.error_handlers import setup_exception_handlers
from fh_app.routers import molecules, spectrum, validation

logging.basicConfig(level=getattr(logging, settings.log_level, logging.INFO))
logger = logging.getLogger(__name__)

# 1) Инициализируем FastAPI
app = FastAPI(
    title=settings.api_title,
    version=settings.api_version,
    description=settings.api_description,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# 2) Обработчики исключений
setup_exception_handlers(app)

# 3) Роутеры
for router in (molecules, spectrum, validation):
    app.include_router(router.router)


# 4) Хелсчек и корень
@app.get("/")
async def root():
    return {
        "message": "Импульсный спектр Фейнберга-Городецкого для IDEP",
        "docs": "/docs",
        "health": "/health",
    }


@app.get("/health")
async def health_check():
    return {"status": "ok", "env": settings.env}


if __name__ == "__main__":
    from fh_app.cli import main

    sys.exit(main())
