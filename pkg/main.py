"""
可废止因果强度评估工具 - 主程序入口
子命令：augment / train / score / eval / copa / shift-report / stats
"""
import sys

from cli.commands import main


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
