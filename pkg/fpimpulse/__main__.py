# Allows `python -m fpimpulse <command> --config ... --out ...`.

from .cli.main import main

if __name__ == "__main__":
    main()
