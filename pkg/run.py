import uvicorn

from ajlint.config import load_settings

if __name__ == "__main__":
    settings = load_settings()
    uvicorn.run("ajlint.main:app", host=settings.host, port=settings.port, reload=True)
